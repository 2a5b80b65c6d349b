#include "hdspk/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdspk {

const char* to_string(WeightingMode mode) {
    switch (mode) {
        case WeightingMode::kNone: return "none";
        case WeightingMode::kEnergy: return "energy";
        case WeightingMode::kNormalized: return "normalized";
    }
    return "?";
}

WeightingMode weighting_mode_from_string(const std::string& name) {
    if (name == "none") return WeightingMode::kNone;
    if (name == "energy") return WeightingMode::kEnergy;
    if (name == "normalized") return WeightingMode::kNormalized;
    throw std::invalid_argument("unknown weighting mode: " + name);
}

void EncoderConfig::validate() const {
    if (dim < 2) throw std::invalid_argument("EncoderConfig: dim must be >= 2");
    if (ngram_order < 1 || ngram_order > 5)
        throw std::invalid_argument("EncoderConfig: ngram order must be in [1, 5]");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("EncoderConfig: alpha must be finite and >= 0");
    if (weighting == WeightingMode::kNormalized && (!(p_target > 0.0) || !std::isfinite(p_target)))
        throw std::invalid_argument(
            "EncoderConfig: normalized weighting needs a finite p_target > 0");
}

LbpCode lbp(const BinVec& bins) {
    LbpCode code;
    for (int i = 1; i < kNumBins; ++i)
        code.bits[static_cast<std::size_t>(i - 1)] = bins[i] > bins[i - 1] ? 1 : 0;
    return code;
}

Hypervector encode_slice(const LbpCode& code, const SeedMemory& mem) {
    Eigen::VectorXi acc = Eigen::VectorXi::Zero(mem.dim());
    for (int i = 1; i <= kLbpBits; ++i)
        acc += mem.seed(i, code.bits[static_cast<std::size_t>(i - 1)]).cast<int>();
    return threshold(acc);
}

Hypervector encode_ngram(std::span<const Hypervector> window, const Permutation& perm) {
    if (window.empty()) throw std::invalid_argument("encode_ngram: empty window");
    const std::size_t n = window.size();
    Hypervector acc = window[n - 1];
    for (std::size_t j = 1; j < n; ++j)
        acc = bind(acc, perm.apply(window[n - 1 - j], static_cast<int>(j)));
    return acc;
}

double slice_weight(double energy, const EncoderConfig& cfg, double c_t) {
    if (energy < 0.0 || !std::isfinite(energy))
        throw std::invalid_argument("slice_weight: energy must be finite and >= 0");
    switch (cfg.weighting) {
        case WeightingMode::kNone: return 1.0;
        case WeightingMode::kEnergy: return std::pow(energy, cfg.alpha);
        case WeightingMode::kNormalized:
            if (!(c_t > 0.0))
                throw std::invalid_argument("slice_weight: c_t must be > 0 in normalized mode");
            return std::pow(c_t * energy, cfg.alpha);
    }
    return 1.0;
}

double context_scale(double p_target, double p_max_utterance) {
    if (!(p_target > 0.0) || !std::isfinite(p_target))
        throw std::invalid_argument("context_scale: p_target must be finite and > 0");
    if (!(p_max_utterance > 0.0))
        throw SilentUtteranceError("context_scale: utterance has no spectral power");
    return p_target / p_max_utterance;
}

double compute_p_target(std::span<const double> per_speaker_max_power) {
    if (per_speaker_max_power.empty())
        throw std::invalid_argument("compute_p_target: no training data");
    double sum = 0.0;
    for (double p : per_speaker_max_power) sum += p;
    return sum / static_cast<double>(per_speaker_max_power.size());
}

UtteranceEncoder::UtteranceEncoder(const EncoderConfig& cfg)
    : cfg_(cfg), mem_(cfg.seed_memory_seed, cfg.dim), perm_(cfg.permutation_seed, cfg.dim) {
    cfg_.validate();
    perm_pow_.reserve(static_cast<std::size_t>(cfg_.ngram_order));
    for (int k = 0; k < cfg_.ngram_order; ++k) perm_pow_.push_back(perm_.composed(k));
}

Hypervector UtteranceEncoder::ngram_at(std::span<const Hypervector> slice_hvs,
                                       std::size_t t) const {
    // bind_{j=0}^{N-1} rho^j S_{t-j}; j = 0 is the newest slice, taken as is.
    Hypervector acc = slice_hvs[t];
    for (int j = 1; j < cfg_.ngram_order; ++j) {
        const Hypervector& src = slice_hvs[t - static_cast<std::size_t>(j)];
        const Eigen::VectorXi& idx = perm_pow_[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < acc.size(); ++i)
            acc[i] = static_cast<std::int8_t>(acc[i] * src[idx[i]]);
    }
    return acc;
}

std::vector<WeightedNgram> UtteranceEncoder::encode(const UtteranceSpectra& spectra,
                                                    double c_t) const {
    const std::size_t n_slices = spectra.slices.size();
    const std::size_t order = static_cast<std::size_t>(cfg_.ngram_order);
    std::vector<WeightedNgram> ngrams;
    if (n_slices < order) return ngrams;

    std::vector<Hypervector> slice_hvs;
    std::vector<double> weights;
    slice_hvs.reserve(n_slices);
    weights.reserve(n_slices);
    for (const auto& slice : spectra.slices) {
        slice_hvs.push_back(encode_slice(lbp(slice), mem_));
        weights.push_back(slice_weight(slice.energy, cfg_, c_t));
    }

    ngrams.reserve(n_slices - order + 1);
    for (std::size_t t = order - 1; t < n_slices; ++t) {
        double w = 1.0;
        for (std::size_t j = 0; j < order; ++j) w *= weights[t - j];
        ngrams.push_back({ngram_at(slice_hvs, t), w});
    }
    return ngrams;
}

AccumVector UtteranceEncoder::encode_sum(const UtteranceSpectra& spectra, double c_t) const {
    AccumVector acc;
    acc.coords = RealVec::Zero(cfg_.dim);
    const std::size_t n_slices = spectra.slices.size();
    const std::size_t order = static_cast<std::size_t>(cfg_.ngram_order);
    if (n_slices < order) return acc;

    std::vector<Hypervector> slice_hvs;
    std::vector<double> weights;
    slice_hvs.reserve(n_slices);
    weights.reserve(n_slices);
    for (const auto& slice : spectra.slices) {
        slice_hvs.push_back(encode_slice(lbp(slice), mem_));
        weights.push_back(slice_weight(slice.energy, cfg_, c_t));
    }

    for (std::size_t t = order - 1; t < n_slices; ++t) {
        double w = 1.0;
        for (std::size_t j = 0; j < order; ++j) w *= weights[t - j];
        const Hypervector hv = ngram_at(slice_hvs, t);
        acc.coords += w * hv.cast<double>();
        ++acc.count;
    }
    return acc;
}

ProfileSet accumulate_profiles(std::vector<UtteranceContribution> contributions) {
    std::sort(contributions.begin(), contributions.end(),
              [](const UtteranceContribution& a, const UtteranceContribution& b) {
                  if (a.speaker_id != b.speaker_id) return a.speaker_id < b.speaker_id;
                  if (a.context_id != b.context_id) return a.context_id < b.context_id;
                  return a.utterance_key < b.utterance_key;
              });

    ProfileSet out;
    for (auto& contribution : contributions) {
        const bool new_context = out.contexts.empty() ||
                                 out.contexts.back().speaker_id != contribution.speaker_id ||
                                 out.contexts.back().context_id != contribution.context_id;
        if (new_context) {
            ContextProfile profile;
            profile.speaker_id = contribution.speaker_id;
            profile.context_id = contribution.context_id;
            profile.vec.coords = RealVec::Zero(contribution.sum.coords.size());
            out.contexts.push_back(std::move(profile));
        }
        auto& ctx = out.contexts.back();
        detail::require_same_dim(ctx.vec.coords.size(), contribution.sum.coords.size(),
                                 "accumulate_profiles");
        ctx.vec.coords += contribution.sum.coords;
        ctx.vec.count += contribution.sum.count;
    }

    for (const auto& ctx : out.contexts) {
        const bool new_speaker =
            out.speakers.empty() || out.speakers.back().speaker_id != ctx.speaker_id;
        if (new_speaker) {
            SpeakerProfile profile;
            profile.speaker_id = ctx.speaker_id;
            profile.vec = RealVec::Zero(ctx.vec.coords.size());
            out.speakers.push_back(std::move(profile));
        }
        out.speakers.back().vec += ctx.vec.coords;
        out.speakers.back().context_ids.push_back(ctx.context_id);
    }
    return out;
}

}  // namespace hdspk
