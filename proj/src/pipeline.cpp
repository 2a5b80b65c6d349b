#include "hdspk/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "hdspk/dsp.hpp"
#include "hdspk/rng.hpp"

namespace hdspk {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs fn(0..n_tasks-1) on up to `threads` workers. Task slots make results
// deterministic regardless of scheduling; exceptions are captured per task.
std::vector<std::exception_ptr> run_tasks(int n_tasks, int threads,
                                          const std::function<void(int)>& fn) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_tasks));
    const int n_workers = std::max(1, std::min(threads, n_tasks));
    if (n_workers <= 1) {
        for (int t = 0; t < n_tasks; ++t) {
            try {
                fn(t);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        }
        return errors;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w)
        workers.emplace_back([&] {
            for (int t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) {
                try {
                    fn(t);
                } catch (...) {
                    errors[static_cast<std::size_t>(t)] = std::current_exception();
                }
            }
        });
    for (auto& worker : workers) worker.join();
    return errors;
}

struct UtteranceTask {
    const SpeakerEntry* speaker = nullptr;
    const ContextEntry* context = nullptr;
    const fs::path* path = nullptr;
};

struct UtteranceOutcome {
    bool ok = false;
    bool parse_failure = false;  // candidates for strict-mode escalation
    std::string warning;
    double audio_seconds = 0.0;
    AccumVector sum;
};

// Analyze + encode one file. Parse failures and silent utterances (which
// normalized weighting cannot scale) come back as warnings, not exceptions.
UtteranceOutcome encode_utterance(const fs::path& path, const SpectrumAnalyzer& analyzer,
                                  const UtteranceEncoder& encoder) {
    UtteranceOutcome outcome;
    AudioClip clip;
    try {
        clip = load_wav(path);
    } catch (const WavError& e) {
        outcome.parse_failure = true;
        outcome.warning = e.what();
        return outcome;
    }
    const UtteranceSpectra spectra = analyzer.analyze(clip);
    double c_t = 1.0;
    if (encoder.config().weighting == WeightingMode::kNormalized) {
        try {
            c_t = context_scale(encoder.config().p_target, spectra.max_bin_power);
        } catch (const SilentUtteranceError&) {
            outcome.warning = path.string() + ": silent utterance, skipped (normalized weighting)";
            return outcome;
        }
    }
    outcome.sum = encoder.encode_sum(spectra, c_t);
    outcome.audio_seconds = static_cast<double>(clip.samples.size()) / kSampleRate;
    outcome.ok = true;
    return outcome;
}

// Mean over the first <= 40 speakers (registry order) of each speaker's
// maximum bin power across its training utterances.
double resolve_p_target(const DatasetIndex& index, const SpectrumAnalyzer& analyzer, int threads,
                        std::vector<std::string>& warnings) {
    const int n_speakers = std::min<int>(40, static_cast<int>(index.speakers.size()));
    std::vector<double> speaker_max(static_cast<std::size_t>(n_speakers), 0.0);

    const auto errors = run_tasks(n_speakers, threads, [&](int s) {
        const SpeakerEntry& speaker = index.speakers[static_cast<std::size_t>(s)];
        double max_power = 0.0;
        for (const auto& ctx : speaker.contexts) {
            if (ctx.context_id == speaker.test_context_id) continue;
            for (const auto& path : ctx.utterances) {
                try {
                    const AudioClip clip = load_wav(path);
                    max_power = std::max(max_power, analyzer.analyze(clip).max_bin_power);
                } catch (const WavError&) {
                    // The encode pass reports unreadable files; stay quiet here.
                }
            }
        }
        speaker_max[static_cast<std::size_t>(s)] = max_power;
    });
    for (const auto& error : errors)
        if (error) std::rethrow_exception(error);

    std::vector<double> usable;
    usable.reserve(speaker_max.size());
    for (int s = 0; s < n_speakers; ++s) {
        if (speaker_max[static_cast<std::size_t>(s)] > 0.0)
            usable.push_back(speaker_max[static_cast<std::size_t>(s)]);
        else
            warnings.push_back("speaker " + index.speakers[static_cast<std::size_t>(s)].speaker_id +
                               " contributed no usable audio to the reference level");
    }
    if (usable.empty())
        throw DatasetError("cannot derive a reference level: no readable training audio in the "
                           "first " +
                           std::to_string(n_speakers) + " speakers");
    return compute_p_target(usable);
}

}  // namespace

TrainResult train_model(const fs::path& root, const TrainOptions& opts) {
    const auto t_start = Clock::now();
    TrainResult result;
    EncoderConfig encoder_cfg = opts.encoder;
    const bool needs_p_target =
        encoder_cfg.weighting == WeightingMode::kNormalized && !opts.p_target_given;
    {
        // Surface bad dims/orders/alphas before walking the dataset; the
        // placeholder stands in for the level resolved below.
        EncoderConfig check = encoder_cfg;
        if (needs_p_target) check.p_target = 1.0;
        check.validate();
    }

    auto t_phase = Clock::now();
    const DatasetIndex index = index_dataset(root);
    result.warnings = index.warnings;
    result.timing.index_seconds = seconds_since(t_phase);

    const SpectrumAnalyzer analyzer;
    if (needs_p_target) {
        t_phase = Clock::now();
        encoder_cfg.p_target =
            resolve_p_target(index, analyzer, opts.threads, result.warnings);
        result.timing.p_target_seconds = seconds_since(t_phase);
    }
    encoder_cfg.validate();
    const UtteranceEncoder encoder(encoder_cfg);

    // Flatten training utterances; task order is the canonical sorted order.
    std::vector<UtteranceTask> tasks;
    for (const auto& speaker : index.speakers)
        for (const auto& ctx : speaker.contexts) {
            if (ctx.context_id == speaker.test_context_id) continue;
            for (const auto& path : ctx.utterances) tasks.push_back({&speaker, &ctx, &path});
        }

    t_phase = Clock::now();
    std::vector<UtteranceOutcome> outcomes(tasks.size());
    const auto errors = run_tasks(static_cast<int>(tasks.size()), opts.threads, [&](int t) {
        outcomes[static_cast<std::size_t>(t)] = encode_utterance(
            *tasks[static_cast<std::size_t>(t)].path, analyzer, encoder);
    });
    for (const auto& error : errors)
        if (error) std::rethrow_exception(error);
    result.timing.encode_seconds = seconds_since(t_phase);

    std::vector<UtteranceContribution> contributions;
    contributions.reserve(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const auto& outcome = outcomes[t];
        if (!outcome.ok) {
            if (opts.strict && outcome.parse_failure) throw DatasetError(outcome.warning);
            result.warnings.push_back(outcome.warning);
            ++result.timing.utterances_skipped;
            continue;
        }
        UtteranceContribution contribution;
        contribution.speaker_id = tasks[t].speaker->speaker_id;
        contribution.context_id = tasks[t].context->context_id;
        contribution.utterance_key = tasks[t].path->filename().string();
        contribution.sum = outcome.sum;
        contributions.push_back(std::move(contribution));
        result.timing.audio_seconds += outcome.audio_seconds;
        ++result.timing.utterances_encoded;
    }
    if (contributions.empty())
        throw DatasetError("no training utterance could be encoded under " + root.string());

    t_phase = Clock::now();
    const ProfileSet profiles = accumulate_profiles(std::move(contributions));

    result.model.encoder = encoder_cfg;
    for (const auto& spk : profiles.speakers) {
        const double norm = spk.vec.norm();
        if (norm == 0.0) {
            result.warnings.push_back("speaker " + spk.speaker_id +
                                      " dropped: profile is all zero (no weighted audio)");
            continue;
        }
        SpeakerRecord record;
        record.speaker_id = spk.speaker_id;
        record.profile = spk.vec.cast<float>();
        record.prototype = (spk.vec / norm).cast<float>();
        for (const auto& ctx : profiles.contexts) {
            if (ctx.speaker_id != spk.speaker_id) continue;
            ContextRecord ctx_record;
            ctx_record.context_id = ctx.context_id;
            ctx_record.ngram_count = static_cast<std::uint64_t>(ctx.vec.count);
            ctx_record.vec = ctx.vec.coords.cast<float>();
            record.contexts.push_back(std::move(ctx_record));
        }
        result.model.speakers.push_back(std::move(record));
    }
    if (result.model.speakers.empty())
        throw DatasetError("every speaker profile came out empty; nothing to store");
    result.timing.accumulate_seconds = seconds_since(t_phase);
    result.timing.total_seconds = seconds_since(t_start);
    return result;
}

TestVectors encode_test_vectors(const Model& model, const fs::path& root,
                                const EvalOptions& opts) {
    TestVectors run;
    const DatasetIndex index = index_dataset(root);
    run.warnings = index.warnings;

    std::map<std::string, int> speaker_index;
    for (int s = 0; s < model.speaker_count(); ++s)
        speaker_index[model.speakers[static_cast<std::size_t>(s)].speaker_id] = s;

    struct TestItem {
        const SpeakerEntry* speaker;
        const fs::path* path;
        int model_index;
    };
    std::vector<TestItem> items;
    for (const auto& speaker : index.speakers) {
        const auto found = speaker_index.find(speaker.speaker_id);
        if (found == speaker_index.end()) {
            run.warnings.push_back("speaker " + speaker.speaker_id +
                                   " is not in the model, test context skipped");
            continue;
        }
        const ContextEntry* test_ctx = speaker.test_context();
        for (const auto& path : test_ctx->utterances)
            items.push_back({&speaker, &path, found->second});
    }
    if (items.empty()) throw DatasetError("no test utterances matched the model's speakers");

    const SpectrumAnalyzer analyzer;
    const UtteranceEncoder encoder(model.encoder);

    auto t_phase = Clock::now();
    std::vector<UtteranceOutcome> outcomes(items.size());
    const auto errors = run_tasks(static_cast<int>(items.size()), opts.threads, [&](int t) {
        outcomes[static_cast<std::size_t>(t)] =
            encode_utterance(*items[static_cast<std::size_t>(t)].path, analyzer, encoder);
    });
    for (const auto& error : errors)
        if (error) std::rethrow_exception(error);

    // Collapse utterances into one vector per reserved context unless
    // per-utterance scoring was requested. Items arrive sorted, so partial
    // sums accumulate in canonical order.
    std::vector<RealVec> test_vecs;
    std::vector<int> test_labels;
    std::vector<std::string> test_names;
    for (std::size_t i = 0; i < items.size();) {
        const auto& item = items[i];
        if (!outcomes[i].ok) {
            if (opts.strict && outcomes[i].parse_failure) throw DatasetError(outcomes[i].warning);
            run.warnings.push_back(outcomes[i].warning);
            ++i;
            continue;
        }
        if (opts.per_utterance) {
            run.audio_seconds += outcomes[i].audio_seconds;
            test_vecs.push_back(outcomes[i].sum.coords);
            test_labels.push_back(item.model_index);
            test_names.push_back(item.speaker->speaker_id + "/" +
                                 item.speaker->test_context_id + "/" +
                                 item.path->filename().string());
            ++i;
            continue;
        }
        RealVec context_sum = RealVec::Zero(model.encoder.dim);
        bool any = false;
        std::size_t j = i;
        for (; j < items.size() && items[j].speaker == item.speaker; ++j) {
            if (!outcomes[j].ok) {
                if (opts.strict && outcomes[j].parse_failure)
                    throw DatasetError(outcomes[j].warning);
                run.warnings.push_back(outcomes[j].warning);
                continue;
            }
            context_sum += outcomes[j].sum.coords;
            run.audio_seconds += outcomes[j].audio_seconds;
            any = true;
        }
        if (any) {
            test_vecs.push_back(std::move(context_sum));
            test_labels.push_back(item.model_index);
            test_names.push_back(item.speaker->speaker_id + "/" + item.speaker->test_context_id);
        }
        i = j;
    }
    for (std::size_t i = 0; i < test_vecs.size(); ++i) {
        if (test_vecs[i].norm() == 0.0) {
            run.warnings.push_back(test_names[i] + ": zero test vector, skipped");
            continue;
        }
        run.vectors.push_back(std::move(test_vecs[i]));
        run.true_indices.push_back(test_labels[i]);
        run.item_names.push_back(std::move(test_names[i]));
    }
    run.encode_seconds = seconds_since(t_phase);
    if (run.vectors.empty())
        throw DatasetError("every test vector was empty; nothing to evaluate");
    return run;
}

EvalRun evaluate_model(const Model& model, const fs::path& root, const EvalOptions& opts) {
    TestVectors tv = encode_test_vectors(model, root, opts);

    EvalRun run;
    run.warnings = std::move(tv.warnings);
    run.true_indices = std::move(tv.true_indices);
    run.item_names = std::move(tv.item_names);
    run.encode_seconds = tv.encode_seconds;
    run.audio_seconds = tv.audio_seconds;

    const PrototypeSet protos = model.prototype_set();
    const auto t_classify = Clock::now();
    run.rankings.reserve(tv.vectors.size());
    for (const RealVec& vec : tv.vectors) run.rankings.push_back(classify(vec, protos));
    run.classify_seconds = seconds_since(t_classify);

    const double active_params =
        opts.active_params > 0.0 ? opts.active_params : static_cast<double>(model.encoder.dim);
    run.report = make_report(run.rankings, run.true_indices, model.speaker_count(), active_params,
                             opts.train_time_seconds);
    return run;
}

RefineResult refine_model(Model& model, const GlvqConfig& cfg, const GlvqEvalHook& hook) {
    RefineResult result;
    if (model.speaker_count() < 2)
        throw ModelError("refine needs at least 2 speakers, model has " +
                         std::to_string(model.speaker_count()));

    std::vector<RealVec> samples;
    std::vector<int> labels;
    for (int s = 0; s < model.speaker_count(); ++s) {
        const auto& spk = model.speakers[static_cast<std::size_t>(s)];
        for (const auto& ctx : spk.contexts) {
            RealVec x = ctx.vec.cast<double>();
            const double norm = x.norm();
            if (norm == 0.0) {
                result.warnings.push_back("context " + spk.speaker_id + "/" + ctx.context_id +
                                          " is all zero, not used for refinement");
                continue;
            }
            samples.push_back(x / norm);
            labels.push_back(s);
        }
    }
    if (samples.empty())
        throw ModelError("model stores no usable context profiles; retrain before refining");

    PrototypeSet protos = model.prototype_set();
    for (Eigen::Index r = 0; r < protos.prototypes.rows(); ++r) {
        const double norm = protos.prototypes.row(r).norm();
        if (norm == 0.0)
            throw ModelError("prototype for speaker " + protos.labels[static_cast<std::size_t>(r)] +
                             " is all zero");
        protos.prototypes.row(r) /= norm;
    }

    Eigen::MatrixXd sample_rows(static_cast<Eigen::Index>(samples.size()), model.encoder.dim);
    for (std::size_t i = 0; i < samples.size(); ++i)
        sample_rows.row(static_cast<Eigen::Index>(i)) = samples[i].transpose();

    const auto t_start = Clock::now();
    result.stats = glvq_train(protos, sample_rows, labels, cfg, hook);
    result.train_seconds = seconds_since(t_start);
    result.n_samples = static_cast<int>(samples.size());
    model.set_prototypes(protos);
    return result;
}

ClassifyResult classify_wav(const Model& model, const fs::path& wav_path) {
    ClassifyResult result;
    const auto t_encode = Clock::now();
    const AudioClip clip = load_wav(wav_path);
    const SpectrumAnalyzer analyzer;
    const UtteranceSpectra spectra = analyzer.analyze(clip);
    const UtteranceEncoder encoder(model.encoder);
    double c_t = 1.0;
    if (model.encoder.weighting == WeightingMode::kNormalized) {
        try {
            c_t = context_scale(model.encoder.p_target, spectra.max_bin_power);
        } catch (const SilentUtteranceError&) {
            throw UnclassifiableError(wav_path.string() +
                                      ": silent audio cannot be scaled to the reference level");
        }
    }
    const AccumVector sum = encoder.encode_sum(spectra, c_t);
    result.encode_seconds = seconds_since(t_encode);
    result.audio_seconds = static_cast<double>(clip.samples.size()) / kSampleRate;

    if (sum.coords.size() == 0 || sum.coords.norm() == 0.0)
        throw UnclassifiableError(wav_path.string() +
                                  ": no weighted spectral content to classify");

    const PrototypeSet protos = model.prototype_set();
    const auto t_classify = Clock::now();
    result.ranking = classify(sum.coords, protos);
    result.classify_seconds = seconds_since(t_classify);
    result.labels = protos.labels;
    return result;
}

ClassifyBench bench_classify(const EncoderConfig& cfg, int n_speakers, double audio_seconds,
                             int reps, std::uint64_t seed) {
    cfg.validate();
    if (n_speakers < 2) throw std::invalid_argument("bench_classify: need >= 2 speakers");
    if (!(audio_seconds > 0.0)) throw std::invalid_argument("bench_classify: need > 0 s of audio");
    if (reps < 1) throw std::invalid_argument("bench_classify: need >= 1 repetition");

    Xoshiro256ss rng(seed);
    PrototypeSet protos;
    protos.prototypes.resize(n_speakers, cfg.dim);
    for (int s = 0; s < n_speakers; ++s) {
        protos.labels.push_back("bench" + std::to_string(s));
        RealVec row(cfg.dim);
        for (int i = 0; i < cfg.dim; ++i) row[i] = 2.0 * rng.next_double() - 1.0;
        protos.prototypes.row(s) = (row / row.norm()).transpose();
    }

    AudioClip clip;
    clip.sample_rate = kSampleRate;
    clip.samples.resize(static_cast<Eigen::Index>(std::lround(audio_seconds * kSampleRate)));
    for (Eigen::Index i = 0; i < clip.samples.size(); ++i)
        clip.samples[i] = 0.5 * (2.0 * rng.next_double() - 1.0);

    const SpectrumAnalyzer analyzer;
    const UtteranceEncoder encoder(cfg);

    ClassifyBench bench;
    bench.audio_seconds = static_cast<double>(clip.samples.size()) / kSampleRate;
    bench.n_speakers = n_speakers;
    bench.encode_ms = std::numeric_limits<double>::infinity();
    bench.classify_ms = std::numeric_limits<double>::infinity();

    AccumVector sum;
    for (int rep = 0; rep < reps; ++rep) {
        const auto t_encode = Clock::now();
        const UtteranceSpectra spectra = analyzer.analyze(clip);
        sum = encoder.encode_sum(spectra);
        bench.encode_ms = std::min(bench.encode_ms, 1000.0 * seconds_since(t_encode));

        const auto t_classify = Clock::now();
        const Ranking ranking = classify(sum.coords, protos);
        bench.classify_ms = std::min(bench.classify_ms, 1000.0 * seconds_since(t_classify));
        if (ranking.empty()) throw std::logic_error("bench_classify: empty ranking");
    }
    return bench;
}

}  // namespace hdspk
