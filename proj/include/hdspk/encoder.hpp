#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdspk/dsp.hpp"
#include "hdspk/vsa.hpp"

namespace hdspk {

enum class WeightingMode : std::uint8_t { kNone = 0, kEnergy = 1, kNormalized = 2 };

const char* to_string(WeightingMode mode);
WeightingMode weighting_mode_from_string(const std::string& name);

struct EncoderConfig {
    int dim = 1024;
    int ngram_order = 3;  // 1..5
    double alpha = 0.3;
    WeightingMode weighting = WeightingMode::kNone;
    double p_target = 0.0;  // set before encoding in normalized mode
    std::uint64_t seed_memory_seed = 1;
    std::uint64_t permutation_seed = 2;

    // Throws std::invalid_argument on out-of-range fields. Normalized
    // weighting requires p_target to be set (computed or passed) beforehand.
    void validate() const;
};

// 39 rise/fall comparisons between adjacent spectrum bins.
// bits[i-1] = 1 iff bins[i] > bins[i-1]; equality maps to 0.
struct LbpCode {
    std::array<std::uint8_t, kLbpBits> bits{};

    bool operator==(const LbpCode&) const = default;
};

LbpCode lbp(const BinVec& bins);
inline LbpCode lbp(const SpectrumSlice& slice) { return lbp(slice.bins); }

// Slice hypervector: select seed (i, bits[i-1]) for i = 1..39, sum, threshold.
// The sum of 39 bipolar vectors is odd in every coordinate, so no coordinate
// is ever zero going into the threshold.
Hypervector encode_slice(const LbpCode& code, const SeedMemory& mem);

// N-gram of the last N slice vectors, oldest first: the j-th newest vector is
// permuted j times and all are bound together. N = 1 returns the newest as is.
Hypervector encode_ngram(std::span<const Hypervector> window, const Permutation& perm);

// Per-slice weight. none -> 1; energy -> E^alpha; normalized -> (c_t*E)^alpha.
// An N-gram's weight is the product of its N slice weights.
double slice_weight(double energy, const EncoderConfig& cfg, double c_t = 1.0);

// Silent utterances (zero max bin power) cannot be scaled; callers skip them.
class SilentUtteranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// c_t = p_target / p_max_utterance; constant across an utterance.
double context_scale(double p_target, double p_max_utterance);

// Mean of per-speaker maximum bin power, taken over the first <= 40 speakers
// in registry order. Callers pass exactly the maxima to average.
double compute_p_target(std::span<const double> per_speaker_max_power);

struct WeightedNgram {
    Hypervector hv;
    double weight = 1.0;
};

// Owns the seed memory and permutation derived from a config; encodes whole
// utterances. Pure per utterance and safe to share across threads.
class UtteranceEncoder {
public:
    explicit UtteranceEncoder(const EncoderConfig& cfg);

    // One WeightedNgram per t >= N-1; never spans utterance boundaries.
    // Count = max(0, slice_count - N + 1).
    std::vector<WeightedNgram> encode(const UtteranceSpectra& spectra, double c_t = 1.0) const;

    // Fused weighted sum of the same N-grams (identical result, no
    // materialized list).
    AccumVector encode_sum(const UtteranceSpectra& spectra, double c_t = 1.0) const;

    const EncoderConfig& config() const { return cfg_; }
    const SeedMemory& seed_memory() const { return mem_; }
    const Permutation& permutation() const { return perm_; }

private:
    Hypervector ngram_at(std::span<const Hypervector> slice_hvs, std::size_t t) const;

    EncoderConfig cfg_;
    SeedMemory mem_;
    Permutation perm_;
    std::vector<Eigen::VectorXi> perm_pow_;  // gather indices for powers 0..N-1
};

// Per-(speaker, context) accumulator V_{s,c}; count is the number of N-grams
// summed in (including zero-weighted ones).
struct ContextProfile {
    std::string speaker_id;
    std::string context_id;
    AccumVector vec;
};

// V_s = sum of the speaker's context profiles.
struct SpeakerProfile {
    std::string speaker_id;
    RealVec vec;
    std::vector<std::string> context_ids;
};

// One utterance's weighted N-gram sum, tagged for canonical merging.
struct UtteranceContribution {
    std::string speaker_id;
    std::string context_id;
    std::string utterance_key;
    AccumVector sum;
};

struct ProfileSet {
    std::vector<ContextProfile> contexts;  // sorted by (speaker_id, context_id)
    std::vector<SpeakerProfile> speakers;  // sorted by speaker_id
};

// Merges utterance contributions into context and speaker profiles. Input
// order does not matter: contributions are sorted by (speaker, context,
// utterance key) before summing, so results are bit-stable.
ProfileSet accumulate_profiles(std::vector<UtteranceContribution> contributions);

}  // namespace hdspk
