// hdspk: command-line workflow around the speaker-identification library.
// Subcommands: synth, train, eval, refine, classify, inspect, bench.
// Exit codes: 0 success, 1 usage error, 2 data/run error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hdspk/dataset.hpp"
#include "hdspk/model.hpp"
#include "hdspk/pipeline.hpp"
#include "hdspk/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string fmt(double value, int digits = 3) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << value;
    return out.str();
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";
}

// Minimal CSV quoting: wrap fields containing separators or quotes.
std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::ofstream open_output(const fs::path& path, const char* what) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(std::string(what) + ": cannot open " + path.string());
    return out;
}

// ---------------------------------------------------------------- subcommands

struct SynthArgs {
    std::string root;
    hdspk::SynthConfig cfg;
};

int run_synth(const SynthArgs& args) {
    hdspk::write_synthetic_corpus(args.root, args.cfg);
    std::cout << "wrote " << args.cfg.n_speakers << " speakers x " << args.cfg.n_contexts
              << " contexts x " << args.cfg.utterances_per_context << " utterances ("
              << fmt(args.cfg.utterance_seconds, 1) << " s each) under " << args.root << "\n";
    return 0;
}

struct TrainArgs {
    std::string root;
    std::string out;
    hdspk::TrainOptions opts;
};

int run_train(TrainArgs& args) {
    args.opts.p_target_given = args.opts.encoder.p_target > 0.0;
    const hdspk::TrainResult result = hdspk::train_model(args.root, args.opts);
    print_warnings(result.warnings);

    const auto& timing = result.timing;
    std::cout << "indexed " << result.model.speaker_count() << " speakers in "
              << fmt(timing.index_seconds) << " s\n";
    if (result.model.encoder.weighting == hdspk::WeightingMode::kNormalized) {
        std::cout << "reference level p_target = " << result.model.encoder.p_target;
        if (!args.opts.p_target_given)
            std::cout << " (derived from training audio in " << fmt(timing.p_target_seconds)
                      << " s)";
        std::cout << "\n";
    }
    const double realtime =
        timing.encode_seconds > 0.0 ? timing.audio_seconds / timing.encode_seconds : 0.0;
    std::cout << "encoded " << timing.utterances_encoded << " utterances ("
              << timing.utterances_skipped << " skipped), " << fmt(timing.audio_seconds, 1)
              << " s of audio, in " << fmt(timing.encode_seconds) << " s (" << fmt(realtime, 1)
              << "x real-time)\n";
    std::cout << "merged profiles in " << fmt(timing.accumulate_seconds) << " s\n";

    std::size_t n_contexts = 0;
    for (const auto& spk : result.model.speakers) n_contexts += spk.contexts.size();
    hdspk::save_model(result.model, args.out);
    std::cout << "model: " << result.model.speaker_count() << " speakers, " << n_contexts
              << " context profiles, " << result.model.stored_parameter_count()
              << " stored values -> " << args.out << "\n";
    std::cout << "total " << fmt(timing.total_seconds) << " s\n";
    return 0;
}

struct EvalArgs {
    std::string model_path;
    std::string root;
    hdspk::EvalOptions opts;
    std::string csv_path;
    std::string json_path;
};

void write_eval_csv(const fs::path& path, const hdspk::EvalRun& run,
                    const std::vector<std::string>& labels) {
    std::ofstream out = open_output(path, "eval csv");
    out << "item,true_speaker,predicted_speaker,rank,top_score\n";
    for (std::size_t i = 0; i < run.rankings.size(); ++i) {
        const int true_index = run.true_indices[i];
        out << csv_field(run.item_names[i]) << ','
            << csv_field(labels[static_cast<std::size_t>(true_index)]) << ','
            << csv_field(labels[static_cast<std::size_t>(run.rankings[i][0].speaker_index)]) << ','
            << hdspk::rank_of(run.rankings[i], true_index) << ','
            << run.rankings[i][0].score << "\n";
    }
}

void write_eval_json(const fs::path& path, const hdspk::EvalRun& run,
                     const std::vector<std::string>& labels, double latency_ms) {
    json j;
    j["n_test"] = run.report.n_test;
    j["top1"] = run.report.top1;
    j["top5"] = run.report.top5;
    j["top10"] = run.report.top10;
    j["mutual_info_bits"] = run.report.mutual_info_bits;
    j["efficiency"] = run.report.efficiency;
    j["latency_ms_per_audio_second"] = latency_ms;
    j["audio_seconds"] = run.audio_seconds;
    json items = json::array();
    for (std::size_t i = 0; i < run.rankings.size(); ++i) {
        const int true_index = run.true_indices[i];
        items.push_back({{"item", run.item_names[i]},
                         {"true_speaker", labels[static_cast<std::size_t>(true_index)]},
                         {"predicted_speaker",
                          labels[static_cast<std::size_t>(run.rankings[i][0].speaker_index)]},
                         {"rank", hdspk::rank_of(run.rankings[i], true_index)},
                         {"top_score", run.rankings[i][0].score}});
    }
    j["items"] = std::move(items);
    open_output(path, "eval json") << j.dump(2) << "\n";
}

int run_eval(const EvalArgs& args) {
    const hdspk::Model model = hdspk::load_model(args.model_path);
    const hdspk::EvalRun run = hdspk::evaluate_model(model, args.root, args.opts);
    print_warnings(run.warnings);

    std::vector<std::string> labels;
    for (const auto& spk : model.speakers) labels.push_back(spk.speaker_id);

    std::cout << "test items: " << run.report.n_test
              << (args.opts.per_utterance ? " (individual utterances)" : " (reserved contexts)")
              << "\n";
    std::cout << "Top-1 " << fmt(run.report.top1) << "   Top-5 " << fmt(run.report.top5)
              << "   Top-10 " << fmt(run.report.top10) << "\n";
    std::cout << "identity information: " << fmt(run.report.mutual_info_bits, 2) << " bits of "
              << fmt(std::log2(static_cast<double>(model.speaker_count())), 2) << " possible\n";
    if (run.report.efficiency > 0.0)
        std::cout << "training efficiency: " << fmt(run.report.efficiency, 1)
                  << " parameter-seconds per bit\n";
    const double latency_ms =
        run.audio_seconds > 0.0
            ? 1000.0 * (run.encode_seconds + run.classify_seconds) / run.audio_seconds
            : 0.0;
    std::cout << "latency: " << fmt(latency_ms, 2) << " ms per second of audio (encode "
              << fmt(1000.0 * run.encode_seconds, 1) << " ms + rank "
              << fmt(1000.0 * run.classify_seconds, 1) << " ms / " << fmt(run.audio_seconds, 1)
              << " s)\n";
    if (!run.report.confusion.empty()) {
        std::cout << "confusions:\n";
        for (const auto& pair : run.report.confusion)
            std::cout << "  " << labels[static_cast<std::size_t>(pair.true_index)] << " -> "
                      << labels[static_cast<std::size_t>(pair.predicted_index)] << " x"
                      << pair.count << "\n";
    }

    if (!args.csv_path.empty()) write_eval_csv(args.csv_path, run, labels);
    if (!args.json_path.empty()) write_eval_json(args.json_path, run, labels, latency_ms);
    return 0;
}

struct RefineArgs {
    std::string model_path;
    std::string out;
    hdspk::GlvqConfig cfg;
    std::string gate = "misclassified";
    std::string stats_csv;
    std::string eval_root;
    int threads = 1;
};

void write_epoch_csv(const fs::path& path, const std::vector<hdspk::EpochStats>& stats,
                     int n_samples) {
    std::ofstream out = open_output(path, "epoch csv");
    out << "epoch,train_misclassified,train_top1,test_top1,test_top5,test_top10\n";
    for (const auto& row : stats) {
        out << row.epoch << ',' << row.train_misclassified << ','
            << (n_samples > 0
                    ? 1.0 - static_cast<double>(row.train_misclassified) / n_samples
                    : 0.0);
        for (double metric : {row.test_top1, row.test_top5, row.test_top10}) {
            out << ',';
            if (!std::isnan(metric)) out << metric;
        }
        out << "\n";
    }
}

int run_refine(const RefineArgs& args) {
    hdspk::Model model = hdspk::load_model(args.model_path);
    hdspk::GlvqConfig cfg = args.cfg;
    cfg.gate = args.gate == "all" ? hdspk::UpdateGate::kAll
                                  : hdspk::UpdateGate::kMisclassifiedOnly;

    hdspk::GlvqEvalHook hook;
    hdspk::TestVectors test_vectors;
    if (!args.eval_root.empty()) {
        hdspk::EvalOptions eval_opts;
        eval_opts.threads = args.threads;
        test_vectors = hdspk::encode_test_vectors(model, args.eval_root, eval_opts);
        print_warnings(test_vectors.warnings);
        hook = [&test_vectors](const hdspk::PrototypeSet& protos,
                               int) -> std::array<double, 3> {
            std::vector<hdspk::Ranking> rankings;
            rankings.reserve(test_vectors.vectors.size());
            for (const auto& vec : test_vectors.vectors)
                rankings.push_back(hdspk::classify(vec, protos));
            return {hdspk::topk_accuracy(rankings, test_vectors.true_indices, 1),
                    hdspk::topk_accuracy(rankings, test_vectors.true_indices, 5),
                    hdspk::topk_accuracy(rankings, test_vectors.true_indices, 10)};
        };
    }

    const hdspk::RefineResult result = hdspk::refine_model(model, cfg, hook);
    print_warnings(result.warnings);

    for (const auto& row : result.stats) {
        std::cout << "epoch " << std::setw(3) << row.epoch << ": train errors "
                  << row.train_misclassified << "/" << result.n_samples;
        if (!std::isnan(row.test_top1)) std::cout << "   test Top-1 " << fmt(row.test_top1);
        std::cout << "\n";
    }
    std::cout << "refined " << model.speaker_count() << " prototypes on " << result.n_samples
              << " context profiles in " << fmt(result.train_seconds) << " s\n";

    if (!args.stats_csv.empty()) write_epoch_csv(args.stats_csv, result.stats, result.n_samples);

    const std::string out_path = args.out.empty() ? args.model_path : args.out;
    hdspk::save_model(model, out_path);
    std::cout << "model -> " << out_path << "\n";
    return 0;
}

struct ClassifyArgs {
    std::string model_path;
    std::string wav_path;
    int top = 10;
};

int run_classify(const ClassifyArgs& args) {
    const hdspk::Model model = hdspk::load_model(args.model_path);
    const hdspk::ClassifyResult result = hdspk::classify_wav(model, args.wav_path);

    const int n_show = std::min<int>(args.top, static_cast<int>(result.ranking.size()));
    for (int r = 0; r < n_show; ++r) {
        const auto& entry = result.ranking[static_cast<std::size_t>(r)];
        std::cout << std::setw(3) << (r + 1) << ". "
                  << result.labels[static_cast<std::size_t>(entry.speaker_index)] << "  "
                  << fmt(entry.score, 4) << "\n";
    }
    std::cout << "encode " << fmt(1000.0 * result.encode_seconds, 1) << " ms, rank "
              << fmt(1000.0 * result.classify_seconds, 1) << " ms for "
              << fmt(result.audio_seconds, 2) << " s of audio\n";
    return 0;
}

struct InspectArgs {
    std::string model_path;
    std::string correlation_csv;
    std::string json_path;
    bool use_prototypes = false;
};

Eigen::MatrixXd profile_rows(const hdspk::Model& model, bool use_prototypes) {
    Eigen::MatrixXd rows(model.speaker_count(), model.dim());
    for (int s = 0; s < model.speaker_count(); ++s) {
        const auto& spk = model.speakers[static_cast<std::size_t>(s)];
        rows.row(s) = (use_prototypes ? spk.prototype : spk.profile).cast<double>().transpose();
    }
    return rows;
}

int run_inspect(const InspectArgs& args) {
    const hdspk::Model model = hdspk::load_model(args.model_path);
    const auto& enc = model.encoder;

    std::cout << "model file: " << args.model_path << "\n";
    std::cout << "dimension " << enc.dim << ", N-gram order " << enc.ngram_order << ", alpha "
              << enc.alpha << ", weighting " << hdspk::to_string(enc.weighting) << "\n";
    if (enc.weighting == hdspk::WeightingMode::kNormalized)
        std::cout << "p_target " << enc.p_target << "\n";
    std::cout << "seeds: memory " << enc.seed_memory_seed << ", permutation "
              << enc.permutation_seed << "\n";
    std::cout << "speakers: " << model.speaker_count() << ", stored values: "
              << model.stored_parameter_count() << " (float32)\n";
    for (const auto& spk : model.speakers) {
        std::uint64_t ngrams = 0;
        for (const auto& ctx : spk.contexts) ngrams += ctx.ngram_count;
        std::cout << "  " << spk.speaker_id << ": " << spk.contexts.size()
                  << " training context(s), " << ngrams << " n-grams\n";
    }

    double mean_off = 0.0;
    const bool want_correlation = !args.correlation_csv.empty() || !args.json_path.empty() ||
                                  model.speaker_count() > 1;
    Eigen::MatrixXd corr;
    if (want_correlation && model.speaker_count() > 1) {
        corr = hdspk::profile_correlation_matrix(profile_rows(model, args.use_prototypes));
        mean_off = hdspk::mean_off_diagonal(corr);
        std::cout << "mean off-diagonal " << (args.use_prototypes ? "prototype" : "profile")
                  << " cosine: " << fmt(mean_off, 4) << "\n";
    }

    if (!args.correlation_csv.empty()) {
        if (corr.size() == 0)
            throw hdspk::ModelError("correlation matrix needs at least 2 speakers");
        std::ofstream out = open_output(args.correlation_csv, "correlation csv");
        out << "speaker";
        for (const auto& spk : model.speakers) out << ',' << csv_field(spk.speaker_id);
        out << "\n";
        for (int r = 0; r < corr.rows(); ++r) {
            out << csv_field(model.speakers[static_cast<std::size_t>(r)].speaker_id);
            for (int c = 0; c < corr.cols(); ++c) out << ',' << corr(r, c);
            out << "\n";
        }
    }

    if (!args.json_path.empty()) {
        json j;
        j["dim"] = enc.dim;
        j["ngram_order"] = enc.ngram_order;
        j["alpha"] = enc.alpha;
        j["weighting"] = hdspk::to_string(enc.weighting);
        if (enc.weighting == hdspk::WeightingMode::kNormalized) j["p_target"] = enc.p_target;
        j["seed_memory_seed"] = enc.seed_memory_seed;
        j["permutation_seed"] = enc.permutation_seed;
        j["stored_values"] = model.stored_parameter_count();
        if (corr.size() > 0) j["mean_off_diagonal_cosine"] = mean_off;
        json speakers = json::array();
        for (const auto& spk : model.speakers) {
            json ctxs = json::array();
            for (const auto& ctx : spk.contexts)
                ctxs.push_back({{"context", ctx.context_id}, {"ngrams", ctx.ngram_count}});
            speakers.push_back({{"id", spk.speaker_id}, {"contexts", std::move(ctxs)}});
        }
        j["speakers"] = std::move(speakers);
        open_output(args.json_path, "inspect json") << j.dump(2) << "\n";
    }
    return 0;
}

struct BenchArgs {
    hdspk::EncoderConfig encoder;
    int speakers = 1251;
    double seconds = 1.0;
    int reps = 5;
    std::uint64_t seed = 42;
};

int run_bench(const BenchArgs& args) {
    const hdspk::ClassifyBench bench =
        hdspk::bench_classify(args.encoder, args.speakers, args.seconds, args.reps, args.seed);
    std::cout << "encode: " << fmt(bench.encode_ms, 2) << " ms for "
              << fmt(bench.audio_seconds, 2) << " s of audio (best of " << args.reps << ")\n";
    std::cout << "rank against " << bench.n_speakers << " prototypes: "
              << fmt(bench.classify_ms, 2) << " ms\n";
    std::cout << "classify total: " << fmt(bench.encode_ms + bench.classify_ms, 2)
              << " ms per utterance, single-threaded\n";
    return 0;
}

void add_encoder_flags(CLI::App* cmd, hdspk::EncoderConfig& cfg, std::string& weighting) {
    cmd->add_option("--dim", cfg.dim, "hypervector dimension")->capture_default_str();
    cmd->add_option("--ngram", cfg.ngram_order, "N-gram order, 1..5")->capture_default_str();
    cmd->add_option("--alpha", cfg.alpha, "energy-weight exponent")->capture_default_str();
    cmd->add_option("--weighting", weighting, "n-gram weighting mode")
        ->check(CLI::IsMember({"none", "energy", "normalized"}))
        ->capture_default_str();
    cmd->add_option("--seed-memory", cfg.seed_memory_seed, "seed-table RNG seed")
        ->capture_default_str();
    cmd->add_option("--seed-perm", cfg.permutation_seed, "permutation RNG seed")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"speaker identification with hyperdimensional spectrum profiles"};
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "write a synthetic formant test corpus");
    synth_cmd->add_option("root", synth.root, "output directory")->required();
    synth_cmd->add_option("--speakers", synth.cfg.n_speakers, "speakers, 1..10")
        ->capture_default_str();
    synth_cmd->add_option("--contexts", synth.cfg.n_contexts, "contexts per speaker, 1..3")
        ->capture_default_str();
    synth_cmd
        ->add_option("--utterances", synth.cfg.utterances_per_context,
                     "utterances per context")
        ->capture_default_str();
    synth_cmd->add_option("--seconds", synth.cfg.utterance_seconds, "utterance length")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.cfg.seed, "corpus RNG seed")->capture_default_str();

    TrainArgs train;
    std::string train_weighting = "none";
    CLI::App* train_cmd =
        app.add_subcommand("train", "build speaker profiles from root/<spk>/<ctx>/*.wav");
    train_cmd->add_option("root", train.root, "dataset root")->required();
    train_cmd->add_option("-o,--out", train.out, "model file to write")->required();
    add_encoder_flags(train_cmd, train.opts.encoder, train_weighting);
    train_cmd
        ->add_option("--p-target", train.opts.encoder.p_target,
                     "reference power level for normalized weighting (default: derived "
                     "from the training audio)")
        ->capture_default_str();
    train_cmd->add_option("--threads", train.opts.threads, "encoder worker threads")
        ->capture_default_str();
    train_cmd->add_flag("--strict", train.opts.strict, "treat unreadable audio as fatal");

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "score the reserved test contexts");
    eval_cmd->add_option("model", eval.model_path, "trained model file")->required();
    eval_cmd->add_option("root", eval.root, "dataset root")->required();
    eval_cmd->add_flag("--per-utterance", eval.opts.per_utterance,
                       "score each test utterance separately");
    eval_cmd->add_option("--threads", eval.opts.threads, "encoder worker threads")
        ->capture_default_str();
    eval_cmd->add_flag("--strict", eval.opts.strict, "treat unreadable audio as fatal");
    eval_cmd->add_option("--train-time", eval.opts.train_time_seconds,
                         "training wall time in seconds, enables the efficiency metric");
    eval_cmd->add_option("--active-params", eval.opts.active_params,
                         "active parameters per update (default: model dimension)");
    eval_cmd->add_option("--csv", eval.csv_path, "write per-item results as CSV");
    eval_cmd->add_option("--json", eval.json_path, "write the full report as JSON");

    RefineArgs refine;
    CLI::App* refine_cmd =
        app.add_subcommand("refine", "sharpen prototypes with learning vector quantization");
    refine_cmd->add_option("model", refine.model_path, "trained model file")->required();
    refine_cmd->add_option("-o,--out", refine.out, "output model (default: refine in place)");
    refine_cmd->add_option("--epochs", refine.cfg.epochs, "training epochs")
        ->capture_default_str();
    refine_cmd->add_option("--lr", refine.cfg.learning_rate, "learning rate")
        ->capture_default_str();
    refine_cmd->add_option("--lr-decay", refine.cfg.lr_decay, "per-epoch learning-rate factor")
        ->capture_default_str();
    refine_cmd->add_option("--seed-shuffle", refine.cfg.shuffle_seed, "epoch shuffle seed")
        ->capture_default_str();
    refine_cmd->add_option("--gate", refine.gate, "which samples update prototypes")
        ->check(CLI::IsMember({"misclassified", "all"}))
        ->capture_default_str();
    refine_cmd->add_option("--stats-csv", refine.stats_csv, "write per-epoch stats as CSV");
    refine_cmd->add_option("--eval-root", refine.eval_root,
                           "dataset root for per-epoch test metrics");
    refine_cmd->add_option("--threads", refine.threads, "encoder worker threads")
        ->capture_default_str();

    ClassifyArgs classify;
    CLI::App* classify_cmd = app.add_subcommand("classify", "rank speakers for one WAV file");
    classify_cmd->add_option("model", classify.model_path, "trained model file")->required();
    classify_cmd->add_option("wav", classify.wav_path, "16 kHz mono PCM WAV")->required();
    classify_cmd->add_option("--top", classify.top, "ranks to print")->capture_default_str();

    InspectArgs inspect;
    CLI::App* inspect_cmd = app.add_subcommand("inspect", "print a model's header and speakers");
    inspect_cmd->add_option("model", inspect.model_path, "model file")->required();
    inspect_cmd->add_option("--correlation-csv", inspect.correlation_csv,
                            "write the speaker-profile cosine matrix as CSV");
    inspect_cmd->add_flag("--prototypes", inspect.use_prototypes,
                          "correlate prototypes instead of raw profiles");
    inspect_cmd->add_option("--json", inspect.json_path, "write a JSON summary");

    BenchArgs bench;
    std::string bench_weighting = "none";
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "time single-utterance classification on synthetic input");
    add_encoder_flags(bench_cmd, bench.encoder, bench_weighting);
    bench_cmd->add_option("--speakers", bench.speakers, "prototype count")
        ->capture_default_str();
    bench_cmd->add_option("--seconds", bench.seconds, "utterance length")->capture_default_str();
    bench_cmd->add_option("--reps", bench.reps, "repetitions, best time wins")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "input RNG seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth_cmd) return run_synth(synth);
        if (*train_cmd) {
            train.opts.encoder.weighting = hdspk::weighting_mode_from_string(train_weighting);
            return run_train(train);
        }
        if (*eval_cmd) return run_eval(eval);
        if (*refine_cmd) return run_refine(refine);
        if (*classify_cmd) return run_classify(classify);
        if (*inspect_cmd) return run_inspect(inspect);
        if (*bench_cmd) {
            bench.encoder.weighting = hdspk::weighting_mode_from_string(bench_weighting);
            if (bench.encoder.weighting == hdspk::WeightingMode::kNormalized &&
                bench.encoder.p_target <= 0.0)
                bench.encoder.p_target = 1.0;  // any positive level works on noise input
            return run_bench(bench);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;  // unreachable: a subcommand is required
}
