#include "hdspk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdspk/dsp.hpp"
#include "hdspk/rng.hpp"

namespace hdspk {

namespace fs = std::filesystem;

namespace {

// Audio-EQ-cookbook constant-peak band-pass biquad, direct form I.
class BandPass {
public:
    BandPass(double center_hz, double bandwidth_hz) {
        const double w0 = 2.0 * std::numbers::pi * center_hz / kSampleRate;
        const double q = center_hz / bandwidth_hz;
        const double alpha = std::sin(w0) / (2.0 * q);
        const double a0 = 1.0 + alpha;
        b0_ = alpha / a0;
        b2_ = -alpha / a0;
        a1_ = -2.0 * std::cos(w0) / a0;
        a2_ = (1.0 - alpha) / a0;
    }

    double step(double x) {
        const double y = b0_ * x + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
        x2_ = x1_;
        x1_ = x;
        y2_ = y1_;
        y1_ = y;
        return y;
    }

private:
    double b0_, b2_, a1_, a2_;
    double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

std::string zero_padded(const char* prefix, int value) {
    std::string digits = std::to_string(value);
    if (digits.size() < 2) digits.insert(digits.begin(), '0');
    return prefix + digits;
}

}  // namespace

void write_synthetic_corpus(const fs::path& root, const SynthConfig& cfg) {
    if (cfg.n_speakers < 1 || cfg.n_speakers > 10)
        throw std::invalid_argument("write_synthetic_corpus: speaker count must be in [1, 10]");
    if (cfg.n_contexts < 1 || cfg.n_contexts > 3)
        throw std::invalid_argument("write_synthetic_corpus: context count must be in [1, 3]");
    if (cfg.utterances_per_context < 1)
        throw std::invalid_argument("write_synthetic_corpus: need >= 1 utterance per context");
    if (!(cfg.utterance_seconds >= 0.5))
        throw std::invalid_argument("write_synthetic_corpus: utterances must be >= 0.5 s");

    // Per-context playback gain and total hard-silence padding (split evenly
    // between the head and the tail of the utterance).
    const double context_gain[3] = {1.0, 0.3, 2.5};
    const double context_silence_s[3] = {0.0, 0.75, 1.5};

    const int n_samples = static_cast<int>(std::lround(cfg.utterance_seconds * kSampleRate));
    Xoshiro256ss rng(cfg.seed);

    for (int spk = 0; spk < cfg.n_speakers; ++spk) {
        // Formant centers one bin (200 Hz) apart per speaker, three disjoint
        // bands: 400..2200, 2800..4600, 5200..7000 Hz.
        const double f1 = 400.0 + 200.0 * spk;
        const double f2 = 2800.0 + 200.0 * spk;
        const double f3 = 5200.0 + 200.0 * spk;

        for (int ctx = 0; ctx < cfg.n_contexts; ++ctx) {
            const fs::path dir = root / zero_padded("spk", spk) / zero_padded("ctx", ctx);
            fs::create_directories(dir);
            const int silence_samples =
                static_cast<int>(std::lround(context_silence_s[ctx] * kSampleRate));
            const int head = silence_samples / 2;
            const int voiced = n_samples - silence_samples;
            if (voiced < kFrameSamples)
                throw std::invalid_argument(
                    "write_synthetic_corpus: utterance too short for its silence padding");

            for (int utt = 0; utt < cfg.utterances_per_context; ++utt) {
                // Small per-utterance detuning, well inside one 200 Hz bin.
                const double jitter1 = 50.0 * (rng.next_double() - 0.5);
                const double jitter2 = 50.0 * (rng.next_double() - 0.5);
                const double jitter3 = 50.0 * (rng.next_double() - 0.5);
                BandPass bp1(f1 + jitter1, 150.0);
                BandPass bp2(f2 + jitter2, 150.0);
                BandPass bp3(f3 + jitter3, 150.0);

                Eigen::VectorXd voiced_part(voiced);
                for (int n = 0; n < voiced; ++n) {
                    const double noise = 2.0 * rng.next_double() - 1.0;
                    voiced_part[n] =
                        bp1.step(noise) + 0.6 * bp2.step(noise) + 0.35 * bp3.step(noise);
                }
                const double peak = voiced_part.cwiseAbs().maxCoeff();
                if (peak > 0.0) voiced_part *= 0.25 / peak;

                Eigen::VectorXd samples = Eigen::VectorXd::Zero(n_samples);
                samples.segment(head, voiced) = context_gain[ctx] * voiced_part;
                // Gain 2.5 on a 0.25 peak stays well under full scale.
                write_wav_pcm16(dir / (zero_padded("utt", utt) + ".wav"), samples);
            }
        }
    }
}

}  // namespace hdspk
