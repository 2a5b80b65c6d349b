#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hdspk/dataset.hpp"
#include "hdspk/model.hpp"
#include "hdspk/pipeline.hpp"
#include "hdspk/rng.hpp"
#include "hdspk/synth.hpp"
#include "test_util.hpp"

using namespace hdspk;
using namespace hdspk::test;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    write_bytes(path, std::vector<unsigned char>(text.begin(), text.end()));
}

// Lays out root/<speaker>/<context>/uttNN.wav with empty placeholder files;
// the index never opens them.
void make_context(const fs::path& root, const std::string& speaker, const std::string& context,
                  int n_utterances) {
    const fs::path dir = root / speaker / context;
    fs::create_directories(dir);
    for (int u = 0; u < n_utterances; ++u)
        write_text(dir / ("utt" + std::to_string(u) + ".wav"), "");
}

std::string read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Vec<float> random_float_vec(Xoshiro256ss& rng, int dim) {
    Vec<float> v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = static_cast<float>(100.0 * (rng.next_double() - 0.5));
    return v;
}

// A small but fully populated model with uneven context counts.
Model sample_model(int dim = 16) {
    Model model;
    model.encoder.dim = dim;
    model.encoder.ngram_order = 2;
    model.encoder.alpha = 0.4;
    model.encoder.weighting = WeightingMode::kNormalized;
    model.encoder.p_target = 3.5;
    model.encoder.seed_memory_seed = 77;
    model.encoder.permutation_seed = 88;

    Xoshiro256ss rng(5150);
    const std::vector<std::string> speaker_ids = {"ada", "bob", "cyd"};
    const std::vector<int> context_counts = {2, 1, 3};
    for (std::size_t s = 0; s < speaker_ids.size(); ++s) {
        SpeakerRecord spk;
        spk.speaker_id = speaker_ids[s];
        spk.profile = random_float_vec(rng, dim);
        Vec<float> proto = random_float_vec(rng, dim);
        spk.prototype = proto / proto.norm();
        for (int c = 0; c < context_counts[s]; ++c) {
            ContextRecord ctx;
            ctx.context_id = "ctx" + std::to_string(c);
            ctx.ngram_count = 100 + 10 * static_cast<std::uint64_t>(c);
            ctx.vec = random_float_vec(rng, dim);
            spk.contexts.push_back(std::move(ctx));
        }
        model.speakers.push_back(std::move(spk));
    }
    return model;
}

void require_models_identical(const Model& a, const Model& b) {
    REQUIRE(a.encoder.dim == b.encoder.dim);
    REQUIRE(a.encoder.ngram_order == b.encoder.ngram_order);
    REQUIRE(a.encoder.alpha == b.encoder.alpha);
    REQUIRE(a.encoder.weighting == b.encoder.weighting);
    REQUIRE(a.encoder.p_target == b.encoder.p_target);
    REQUIRE(a.encoder.seed_memory_seed == b.encoder.seed_memory_seed);
    REQUIRE(a.encoder.permutation_seed == b.encoder.permutation_seed);
    REQUIRE(a.speaker_count() == b.speaker_count());
    for (int s = 0; s < a.speaker_count(); ++s) {
        const auto& sa = a.speakers[static_cast<std::size_t>(s)];
        const auto& sb = b.speakers[static_cast<std::size_t>(s)];
        REQUIRE(sa.speaker_id == sb.speaker_id);
        REQUIRE(sa.profile.cwiseEqual(sb.profile).all());
        REQUIRE(sa.prototype.cwiseEqual(sb.prototype).all());
        REQUIRE(sa.contexts.size() == sb.contexts.size());
        for (std::size_t c = 0; c < sa.contexts.size(); ++c) {
            REQUIRE(sa.contexts[c].context_id == sb.contexts[c].context_id);
            REQUIRE(sa.contexts[c].ngram_count == sb.contexts[c].ngram_count);
            REQUIRE(sa.contexts[c].vec.cwiseEqual(sb.contexts[c].vec).all());
        }
    }
}

// Loading a copy of `bytes` with byte `offset` replaced must raise ModelError.
void require_load_fails(const std::string& bytes, std::size_t offset, char value,
                        const fs::path& dir, const char* tag) {
    std::string corrupted = bytes;
    REQUIRE(offset < corrupted.size());
    corrupted[offset] = value;
    const fs::path path = dir / (std::string("corrupt_") + tag + ".hdspk");
    write_text(path, corrupted);
    REQUIRE_THROWS_AS(load_model(path), ModelError);
}

EncoderConfig fast_encoder() {
    EncoderConfig cfg;
    cfg.dim = 256;
    cfg.ngram_order = 3;
    cfg.weighting = WeightingMode::kEnergy;
    cfg.seed_memory_seed = 29;
    cfg.permutation_seed = 31;
    return cfg;
}

}  // namespace

TEST_CASE("split rule reserves the smallest context holding at least five utterances") {
    TempDir tmp;
    make_context(tmp.path(), "alice", "ctxA", 7);
    make_context(tmp.path(), "alice", "ctxB", 5);
    make_context(tmp.path(), "alice", "ctxC", 9);

    const DatasetIndex index = index_dataset(tmp.path());
    REQUIRE(index.speakers.size() == 1);
    const SpeakerEntry& spk = index.speakers[0];
    CHECK(spk.speaker_id == "alice");
    CHECK(spk.test_context_id == "ctxB");
    REQUIRE(spk.contexts.size() == 3);
    CHECK(spk.contexts[0].context_id == "ctxA");
    CHECK(spk.contexts[1].context_id == "ctxB");
    CHECK(spk.contexts[2].context_id == "ctxC");
    REQUIRE(spk.test_context() != nullptr);
    CHECK(spk.test_context()->utterances.size() == 5);
    CHECK(index.warnings.empty());
}

TEST_CASE("split rule breaks count ties toward the lexicographically first context") {
    TempDir tmp;
    make_context(tmp.path(), "s1", "ctxB", 5);
    make_context(tmp.path(), "s1", "ctxA", 5);
    make_context(tmp.path(), "s1", "ctxC", 6);

    const DatasetIndex index = index_dataset(tmp.path());
    REQUIRE(index.speakers.size() == 1);
    CHECK(index.speakers[0].test_context_id == "ctxA");
}

TEST_CASE("speakers without a five-utterance context are flagged and excluded") {
    TempDir tmp;
    make_context(tmp.path(), "small", "ctxA", 3);
    make_context(tmp.path(), "small", "ctxB", 4);
    make_context(tmp.path(), "big", "ctxA", 5);
    make_context(tmp.path(), "big", "ctxB", 5);

    const DatasetIndex index = index_dataset(tmp.path());
    REQUIRE(index.speakers.size() == 1);
    CHECK(index.speakers[0].speaker_id == "big");
    REQUIRE(index.excluded_speakers.size() == 1);
    CHECK(index.excluded_speakers[0] == "small");
    REQUIRE(index.warnings.size() == 1);
    CHECK(index.warnings[0].find("small") != std::string::npos);
    CHECK(index.warnings[0].find("at least 5") != std::string::npos);
}

TEST_CASE("speakers with fewer than two non-empty contexts are excluded") {
    TempDir tmp;
    make_context(tmp.path(), "solo", "only", 8);
    fs::create_directories(tmp.path() / "solo" / "hollow");  // no audio inside
    make_context(tmp.path(), "duo", "ctxA", 5);
    make_context(tmp.path(), "duo", "ctxB", 2);

    const DatasetIndex index = index_dataset(tmp.path());
    REQUIRE(index.speakers.size() == 1);
    CHECK(index.speakers[0].speaker_id == "duo");
    REQUIRE(index.excluded_speakers.size() == 1);
    CHECK(index.excluded_speakers[0] == "solo");
    REQUIRE(index.warnings.size() == 1);
    CHECK(index.warnings[0].find("need at least 2") != std::string::npos);
}

TEST_CASE("only files with a wav extension count as utterances") {
    TempDir tmp;
    make_context(tmp.path(), "spk", "ctxA", 5);
    make_context(tmp.path(), "spk", "ctxB", 4);
    const fs::path extra = tmp.path() / "spk" / "ctxB";
    write_text(extra / "notes.txt", "not audio");
    write_text(extra / "UPPER.WAV", "");  // extension match is case-insensitive

    const DatasetIndex index = index_dataset(tmp.path());
    REQUIRE(index.speakers.size() == 1);
    const SpeakerEntry& spk = index.speakers[0];
    REQUIRE(spk.contexts.size() == 2);
    CHECK(spk.contexts[1].utterances.size() == 5);  // 4 + UPPER.WAV, not notes.txt
    CHECK(spk.test_context_id == "ctxA");
}

TEST_CASE("utterances are sorted by filename and indexing is deterministic") {
    TempDir tmp;
    const fs::path dir = tmp.path() / "spk" / "ctxA";
    fs::create_directories(dir);
    for (const char* name : {"c.wav", "a.wav", "e.wav", "b.wav", "d.wav"})
        write_text(dir / name, "");
    make_context(tmp.path(), "spk", "ctxB", 5);

    const DatasetIndex first = index_dataset(tmp.path());
    REQUIRE(first.speakers.size() == 1);
    const auto& utts = first.speakers[0].contexts[0].utterances;
    REQUIRE(utts.size() == 5);
    for (std::size_t i = 1; i < utts.size(); ++i) CHECK(utts[i - 1] < utts[i]);
    CHECK(utts[0].filename() == "a.wav");
    CHECK(utts[4].filename() == "e.wav");

    const DatasetIndex second = index_dataset(tmp.path());
    REQUIRE(second.speakers.size() == first.speakers.size());
    for (std::size_t s = 0; s < first.speakers.size(); ++s) {
        CHECK(second.speakers[s].speaker_id == first.speakers[s].speaker_id);
        CHECK(second.speakers[s].test_context_id == first.speakers[s].test_context_id);
    }
}

TEST_CASE("index_dataset rejects missing roots and all-ineligible trees") {
    TempDir tmp;
    CHECK_THROWS_AS(index_dataset(tmp.path() / "nowhere"), DatasetError);

    const fs::path file_root = tmp.path() / "plain.txt";
    write_text(file_root, "x");
    CHECK_THROWS_AS(index_dataset(file_root), DatasetError);

    const fs::path all_excluded = tmp.path() / "tree";
    make_context(all_excluded, "spk", "only", 9);
    CHECK_THROWS_AS(index_dataset(all_excluded), DatasetError);
}

TEST_CASE("model save/load round-trips every field bit-exactly") {
    TempDir tmp;
    const Model model = sample_model();
    const fs::path path = tmp.path() / "speakers.hdspk";
    save_model(model, path);
    REQUIRE(fs::exists(path));
    CHECK(!fs::exists(tmp.path() / "speakers.hdspk.tmp"));  // temp was renamed away

    const Model loaded = load_model(path);
    require_models_identical(model, loaded);

    // Saving the loaded model reproduces the file byte for byte.
    const fs::path path2 = tmp.path() / "resaved.hdspk";
    save_model(loaded, path2);
    CHECK(read_file_bytes(path) == read_file_bytes(path2));
}

TEST_CASE("stored_parameter_count counts profiles, prototypes and contexts") {
    const Model model = sample_model(16);
    // 3 speakers * (2 vectors * 16) + (2 + 1 + 3) contexts * 16.
    CHECK(model.stored_parameter_count() == 3 * 2 * 16 + 6 * 16);
}

TEST_CASE("prototype_set exports rows that set_prototypes accepts back") {
    Model model = sample_model();
    PrototypeSet protos = model.prototype_set();
    REQUIRE(protos.size() == 3);
    REQUIRE(protos.dim() == 16);
    CHECK(protos.labels == std::vector<std::string>{"ada", "bob", "cyd"});
    for (int s = 0; s < protos.size(); ++s)
        for (int i = 0; i < protos.dim(); ++i)
            CHECK(protos.prototypes(s, i) ==
                  static_cast<double>(model.speakers[static_cast<std::size_t>(s)].prototype[i]));

    protos.prototypes.row(1).setConstant(1.0 / 4.0);
    model.set_prototypes(protos);
    CHECK(model.speakers[1].prototype[0] == 0.25f);

    PrototypeSet wrong = protos;
    std::swap(wrong.labels[0], wrong.labels[1]);
    CHECK_THROWS_AS(model.set_prototypes(wrong), std::invalid_argument);
}

TEST_CASE("load_model rejects corrupted files with named errors") {
    TempDir tmp;
    const Model model = sample_model();
    const fs::path path = tmp.path() / "base.hdspk";
    save_model(model, path);
    const std::string bytes = read_file_bytes(path);

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_model(tmp.path() / "absent.hdspk"), ModelError);
    }
    SUBCASE("bad magic") { require_load_fails(bytes, 0, 'X', tmp.path(), "magic"); }
    SUBCASE("unsupported version") {
        require_load_fails(bytes, 6, '\x63', tmp.path(), "version");  // version = 99
    }
    SUBCASE("unknown weighting mode") {
        require_load_fails(bytes, 16, '\x07', tmp.path(), "weighting");
    }
    SUBCASE("invalid encoder field") {
        require_load_fails(bytes, 8, '\x00', tmp.path(), "dim");  // dim -> 0
    }
    SUBCASE("truncated file") {
        const fs::path cut = tmp.path() / "cut.hdspk";
        write_text(cut, bytes.substr(0, bytes.size() / 2));
        CHECK_THROWS_AS(load_model(cut), ModelError);
        try {
            load_model(cut);
            REQUIRE(false);
        } catch (const ModelError& e) {
            CHECK(std::string(e.what()).find("truncated") != std::string::npos);
        }
    }
    SUBCASE("trailing bytes") {
        const fs::path padded = tmp.path() / "padded.hdspk";
        write_text(padded, bytes + std::string(1, '\0'));
        CHECK_THROWS_AS(load_model(padded), ModelError);
    }
    SUBCASE("implausible string length") {
        // The first string is ada's speaker id right after the u32 speaker
        // count; blow up its length prefix.
        const std::size_t header = 6 + 2 + 4 + 4 + 1 + 8 + 8 + 8 + 8 + 4;
        require_load_fails(bytes, header + 3, '\x7f', tmp.path(), "strlen");
    }
}

TEST_CASE("synthetic corpus writes the expected tree and validates its config") {
    TempDir tmp;
    SynthConfig cfg;
    cfg.n_speakers = 2;
    cfg.n_contexts = 2;
    cfg.utterances_per_context = 5;
    cfg.utterance_seconds = 1.0;
    write_synthetic_corpus(tmp.path() / "corpus", cfg);

    const DatasetIndex index = index_dataset(tmp.path() / "corpus");
    REQUIRE(index.speakers.size() == 2);
    CHECK(index.speakers[0].speaker_id == "spk00");
    CHECK(index.speakers[1].speaker_id == "spk01");
    for (const auto& spk : index.speakers) {
        REQUIRE(spk.contexts.size() == 2);
        CHECK(spk.test_context_id == "ctx00");  // equal counts, first id wins
        for (const auto& ctx : spk.contexts) CHECK(ctx.utterances.size() == 5);
    }
    // Files are honest 16 kHz mono PCM.
    const AudioClip clip = load_wav(index.speakers[0].contexts[0].utterances[0]);
    CHECK(clip.sample_rate == kSampleRate);
    CHECK(clip.samples.size() == 16000);

    SynthConfig bad = cfg;
    bad.n_speakers = 11;
    CHECK_THROWS_AS(write_synthetic_corpus(tmp.path() / "c2", bad), std::invalid_argument);
    bad = cfg;
    bad.n_contexts = 3;  // 1.5 s of silence cannot fit a 1 s utterance
    CHECK_THROWS_AS(write_synthetic_corpus(tmp.path() / "c3", bad), std::invalid_argument);
}

TEST_CASE("train_model builds per-speaker profiles from the training contexts") {
    TempDir tmp;
    SynthConfig synth;
    synth.n_speakers = 3;
    synth.n_contexts = 2;
    synth.utterances_per_context = 5;
    synth.utterance_seconds = 1.0;
    const fs::path root = tmp.path() / "corpus";
    write_synthetic_corpus(root, synth);

    TrainOptions opts;
    opts.encoder = fast_encoder();
    const TrainResult result = train_model(root, opts);

    REQUIRE(result.model.speaker_count() == 3);
    CHECK(result.model.speakers[0].speaker_id == "spk00");
    CHECK(result.model.speakers[2].speaker_id == "spk02");
    for (const auto& spk : result.model.speakers) {
        REQUIRE(spk.contexts.size() == 1);  // ctx00 is reserved for testing
        CHECK(spk.contexts[0].context_id == "ctx01");
        CHECK(spk.contexts[0].ngram_count > 0);
        CHECK(spk.profile.norm() > 0.0f);
        CHECK(spk.prototype.norm() == doctest::Approx(1.0).epsilon(1e-5));
        // profile == sum of its contexts (exactly one here)
        CHECK(spk.profile.cwiseEqual(spk.contexts[0].vec).all());
    }
    CHECK(result.timing.utterances_encoded == 15);
    CHECK(result.timing.utterances_skipped == 0);
    CHECK(result.timing.audio_seconds == doctest::Approx(15.0));
    CHECK(result.timing.total_seconds > 0.0);
    CHECK(result.warnings.empty());

    SUBCASE("training twice writes byte-identical model files") {
        const TrainResult again = train_model(root, opts);
        const fs::path p1 = tmp.path() / "m1.hdspk";
        const fs::path p2 = tmp.path() / "m2.hdspk";
        save_model(result.model, p1);
        save_model(again.model, p2);
        CHECK(read_file_bytes(p1) == read_file_bytes(p2));
    }

    SUBCASE("multi-threaded training matches single-threaded bit for bit") {
        TrainOptions threaded = opts;
        threaded.threads = 4;
        const TrainResult parallel = train_model(root, threaded);
        const fs::path p1 = tmp.path() / "serial.hdspk";
        const fs::path p2 = tmp.path() / "parallel.hdspk";
        save_model(result.model, p1);
        save_model(parallel.model, p2);
        CHECK(read_file_bytes(p1) == read_file_bytes(p2));
    }

    SUBCASE("evaluation on the reserved contexts identifies every speaker") {
        EvalOptions eval_opts;
        const EvalRun run = evaluate_model(result.model, root, eval_opts);
        REQUIRE(run.report.n_test == 3);  // one vector per reserved context
        CHECK(run.report.top1 == doctest::Approx(1.0));
        CHECK(run.item_names[0] == "spk00/ctx00");
        CHECK(run.report.mutual_info_bits > 0.0);
        CHECK(run.report.efficiency == 0.0);  // no training time supplied
        CHECK(run.audio_seconds == doctest::Approx(15.0));

        EvalOptions per_utt = eval_opts;
        per_utt.per_utterance = true;
        const EvalRun fine = evaluate_model(result.model, root, per_utt);
        CHECK(fine.report.n_test == 15);
        CHECK(fine.report.top1 == doctest::Approx(1.0));

        EvalOptions with_time = eval_opts;
        with_time.train_time_seconds = 2.0;
        with_time.active_params = 512.0;
        const EvalRun timed = evaluate_model(result.model, root, with_time);
        CHECK(timed.report.efficiency > 0.0);
    }

    SUBCASE("classify_wav ranks the true speaker first on a held-out file") {
        const fs::path probe = root / "spk02" / "ctx00" / "utt00.wav";
        const ClassifyResult res = classify_wav(result.model, probe);
        REQUIRE(res.ranking.size() == 3);
        CHECK(res.labels[res.ranking[0].speaker_index] == "spk02");
        CHECK(res.ranking[0].score > res.ranking[1].score);
        CHECK(res.encode_seconds > 0.0);
        CHECK(res.audio_seconds == doctest::Approx(1.0));
    }

    SUBCASE("refine with zero epochs leaves prototypes in place") {
        Model model = result.model;
        GlvqConfig cfg;
        cfg.epochs = 0;
        const RefineResult refined = refine_model(model, cfg);
        REQUIRE(refined.stats.size() == 1);
        CHECK(refined.n_samples == 3);  // one stored context per speaker
        for (int s = 0; s < model.speaker_count(); ++s) {
            const auto& before = result.model.speakers[static_cast<std::size_t>(s)].prototype;
            const auto& after = model.speakers[static_cast<std::size_t>(s)].prototype;
            CHECK((before - after).cwiseAbs().maxCoeff() < 1e-6f);
        }
    }

    SUBCASE("refine runs full epochs on an already-separable model") {
        Model model = result.model;
        GlvqConfig cfg;
        cfg.epochs = 4;
        cfg.learning_rate = 0.05;
        const RefineResult refined = refine_model(model, cfg);
        REQUIRE(refined.stats.size() == 5);
        // Each speaker's lone context sample sits on its own prototype.
        for (const auto& stats : refined.stats) CHECK(stats.train_misclassified == 0);
        CHECK(refined.train_seconds >= 0.0);
    }
}

TEST_CASE("train_model resolves the reference level for normalized weighting") {
    TempDir tmp;
    SynthConfig synth;
    synth.n_speakers = 2;
    synth.n_contexts = 2;
    synth.utterances_per_context = 5;
    synth.utterance_seconds = 1.0;
    const fs::path root = tmp.path() / "corpus";
    write_synthetic_corpus(root, synth);

    TrainOptions opts;
    opts.encoder = fast_encoder();
    opts.encoder.weighting = WeightingMode::kNormalized;
    opts.encoder.p_target = 0.0;  // not given: derived from the training audio
    const TrainResult result = train_model(root, opts);

    CHECK(result.model.encoder.weighting == WeightingMode::kNormalized);
    CHECK(result.model.encoder.p_target > 0.0);
    CHECK(result.timing.utterances_encoded == 10);

    // The stored level makes the model self-contained for evaluation.
    const EvalRun run = evaluate_model(result.model, root, EvalOptions{});
    CHECK(run.report.n_test == 2);
    CHECK(run.report.top1 == doctest::Approx(1.0));

    // An explicit level is honored untouched.
    TrainOptions pinned = opts;
    pinned.encoder.p_target = 0.125;
    pinned.p_target_given = true;
    const TrainResult fixed = train_model(root, pinned);
    CHECK(fixed.model.encoder.p_target == 0.125);
    CHECK(fixed.timing.p_target_seconds == 0.0);
}

TEST_CASE("unreadable audio is skipped with a warning unless strict") {
    TempDir tmp;
    SynthConfig synth;
    synth.n_speakers = 2;
    synth.n_contexts = 2;
    synth.utterances_per_context = 5;
    synth.utterance_seconds = 1.0;
    const fs::path root = tmp.path() / "corpus";
    write_synthetic_corpus(root, synth);
    // Clobber one training utterance (ctx01 is the training context).
    write_text(root / "spk00" / "ctx01" / "utt03.wav", "RIFFgarbage");

    TrainOptions opts;
    opts.encoder = fast_encoder();
    const TrainResult result = train_model(root, opts);
    CHECK(result.timing.utterances_encoded == 9);
    CHECK(result.timing.utterances_skipped == 1);
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("utt03.wav") != std::string::npos);

    TrainOptions strict = opts;
    strict.strict = true;
    CHECK_THROWS_AS(train_model(root, strict), DatasetError);
}

TEST_CASE("train_model validates its encoder configuration up front") {
    TempDir tmp;  // never touched: validation fires before the walk
    TrainOptions opts;
    opts.encoder = fast_encoder();
    opts.encoder.dim = 0;
    CHECK_THROWS_AS(train_model(tmp.path() / "nowhere", opts), std::invalid_argument);
}

TEST_CASE("refine_model rejects models it cannot train on") {
    Model tiny = sample_model();
    tiny.speakers.resize(1);
    CHECK_THROWS_AS(refine_model(tiny, GlvqConfig{}), ModelError);

    Model hollow = sample_model();
    for (auto& spk : hollow.speakers)
        for (auto& ctx : spk.contexts) ctx.vec.setZero();
    CHECK_THROWS_AS(refine_model(hollow, GlvqConfig{}), ModelError);
}

TEST_CASE("bench_classify times encoding and ranking on synthetic input") {
    EncoderConfig cfg = fast_encoder();
    const ClassifyBench bench = bench_classify(cfg, 10, 0.5, 2, 99);
    CHECK(bench.encode_ms > 0.0);
    CHECK(bench.encode_ms < 1e4);
    CHECK(bench.classify_ms >= 0.0);
    CHECK(bench.classify_ms < 1e4);
    CHECK(bench.audio_seconds == doctest::Approx(0.5));
    CHECK(bench.n_speakers == 10);

    CHECK_THROWS_AS(bench_classify(cfg, 1, 0.5, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(bench_classify(cfg, 5, 0.0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(bench_classify(cfg, 5, 0.5, 0, 1), std::invalid_argument);
}
