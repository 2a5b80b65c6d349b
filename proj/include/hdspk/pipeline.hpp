#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hdspk/dataset.hpp"
#include "hdspk/encoder.hpp"
#include "hdspk/eval.hpp"
#include "hdspk/glvq.hpp"
#include "hdspk/model.hpp"

namespace hdspk {

struct TrainOptions {
    EncoderConfig encoder;
    int threads = 1;
    bool strict = false;         // escalate unreadable audio files to errors
    bool p_target_given = false; // encoder.p_target was set by the caller
};

struct TrainTiming {
    double index_seconds = 0.0;
    double p_target_seconds = 0.0;
    double encode_seconds = 0.0;
    double accumulate_seconds = 0.0;
    double total_seconds = 0.0;
    double audio_seconds = 0.0;  // audio successfully encoded
    int utterances_encoded = 0;
    int utterances_skipped = 0;
};

struct TrainResult {
    Model model;
    TrainTiming timing;
    std::vector<std::string> warnings;
};

// One pass over the training contexts: index -> (resolve p_target in
// normalized mode) -> analyze + encode utterances (worker pool) -> merge into
// profiles in canonical order -> model with centroid prototypes.
TrainResult train_model(const std::filesystem::path& root, const TrainOptions& opts);

struct EvalOptions {
    bool per_utterance = false;      // default: one test vector per reserved context
    int threads = 1;
    bool strict = false;
    double active_params = 0.0;      // 0 -> model dimension
    double train_time_seconds = 0.0; // 0 -> efficiency not computed
};

// Encoded test set: one row per reserved context (or per test utterance).
struct TestVectors {
    std::vector<RealVec> vectors;        // nonzero; zero vectors are dropped
    std::vector<int> true_indices;       // into the model's speaker order
    std::vector<std::string> item_names; // "speaker/context" or ".../utterance"
    std::vector<std::string> warnings;
    double encode_seconds = 0.0;
    double audio_seconds = 0.0;
};

// Encodes the reserved contexts with the model's own configuration; the
// result can be ranked against any prototype set of the model's shape.
TestVectors encode_test_vectors(const Model& model, const std::filesystem::path& root,
                                const EvalOptions& opts);

struct EvalRun {
    EvalReport report;
    std::vector<Ranking> rankings;       // aligned with true_indices/item_names
    std::vector<int> true_indices;
    std::vector<std::string> item_names;
    std::vector<std::string> warnings;
    double encode_seconds = 0.0;
    double classify_seconds = 0.0;
    double audio_seconds = 0.0;
};

// Encodes each speaker's reserved context (or its individual utterances) and
// ranks it against the model's prototypes.
EvalRun evaluate_model(const Model& model, const std::filesystem::path& root,
                       const EvalOptions& opts);

struct RefineResult {
    std::vector<EpochStats> stats;
    std::vector<std::string> warnings;
    double train_seconds = 0.0;
    int n_samples = 0;
};

// GLVQ over the model's stored context profiles, starting from the stored
// prototypes; refined rows are written back into the model.
RefineResult refine_model(Model& model, const GlvqConfig& cfg,
                          const GlvqEvalHook& hook = nullptr);

struct ClassifyResult {
    Ranking ranking;             // aligned with the model's speaker order
    std::vector<std::string> labels;
    double encode_seconds = 0.0;
    double classify_seconds = 0.0;
    double audio_seconds = 0.0;
};

ClassifyResult classify_wav(const Model& model, const std::filesystem::path& wav_path);

struct ClassifyBench {
    double encode_ms = 0.0;    // best rep: analyze + encode the clip
    double classify_ms = 0.0;  // best rep: rank against all prototypes
    double audio_seconds = 0.0;
    int n_speakers = 0;
};

// Times a single-utterance classification against randomly drawn prototypes.
ClassifyBench bench_classify(const EncoderConfig& cfg, int n_speakers, double audio_seconds,
                             int reps, std::uint64_t seed);

}  // namespace hdspk
