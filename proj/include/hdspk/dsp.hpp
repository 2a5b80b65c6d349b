#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdspk {

inline constexpr int kSampleRate = 16000;
inline constexpr int kFrameSamples = 80;   // 5 ms window
inline constexpr int kHopSamples = 320;    // 20 ms hop
inline constexpr int kNumBins = 40;        // 200 Hz spacing, 0..7800 Hz

using Frame = Eigen::Matrix<double, kFrameSamples, 1>;
using BinVec = Eigen::Matrix<double, kNumBins, 1>;
using FrameMatrix = Eigen::Matrix<double, kFrameSamples, Eigen::Dynamic>;

// Mono audio with samples scaled to [-1, 1].
struct AudioClip {
    Eigen::VectorXd samples;
    int sample_rate = kSampleRate;
};

// Power in the first 40 DFT bins of one 5-ms frame, plus the slice energy
// E_t = sum of those 40 bins.
struct SpectrumSlice {
    BinVec bins;
    double energy = 0.0;
    int t_index = 0;
};

struct UtteranceSpectra {
    std::vector<SpectrumSlice> slices;
    double max_bin_power = 0.0;  // max over all slices and bins
};

class WavError : public std::runtime_error {
public:
    enum class Kind {
        kNotAWav,
        kUnsupportedCodec,
        kUnsupportedSampleRate,
        kUnsupportedChannels,
        kTruncated,
    };
    WavError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Reads a RIFF/WAVE file: PCM signed 16-bit little-endian, mono, 16 kHz.
// Samples are scaled by 1/32768. Anything else raises a WavError naming the
// offending property.
AudioClip load_wav(const std::filesystem::path& path);

// Writes mono PCM 16-bit WAV; samples are clamped to [-1, 1].
void write_wav_pcm16(const std::filesystem::path& path, const Eigen::VectorXd& samples,
                     int sample_rate = kSampleRate);

// Number of full 80-sample frames at a 320-sample hop; trailing partial
// windows are dropped.
inline Eigen::Index frame_count(Eigen::Index n_samples) {
    if (n_samples < kFrameSamples) return 0;
    return (n_samples - kFrameSamples) / kHopSamples + 1;
}

// Frame k occupies column k and covers samples [k*320, k*320 + 80). A clip
// shorter than one window yields zero columns.
FrameMatrix frame_stream(const AudioClip& clip);

// Hann-windowed 80-point real DFT, keeping |X_f|^2 for f = 0..39.
class SpectrumAnalyzer {
public:
    SpectrumAnalyzer();

    SpectrumSlice power_spectrum(const Eigen::Ref<const Frame>& frame, int t_index = 0) const;
    // Checked variant for arbitrary-length inputs.
    SpectrumSlice power_spectrum_checked(const Eigen::VectorXd& frame, int t_index = 0) const;

    UtteranceSpectra analyze(const AudioClip& clip) const;

    const Frame& window() const { return window_; }

private:
    Frame window_;  // periodic Hann: 0.5 * (1 - cos(2*pi*n/80))
    Eigen::Matrix<double, kNumBins, kFrameSamples> cos_basis_;
    Eigen::Matrix<double, kNumBins, kFrameSamples> sin_basis_;
};

}  // namespace hdspk
