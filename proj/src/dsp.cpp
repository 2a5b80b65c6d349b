#include "hdspk/dsp.hpp"

#include <cmath>
#include <numbers>

namespace hdspk {

FrameMatrix frame_stream(const AudioClip& clip) {
    const Eigen::Index n_frames = frame_count(clip.samples.size());
    FrameMatrix frames(kFrameSamples, n_frames);
    for (Eigen::Index k = 0; k < n_frames; ++k)
        frames.col(k) = clip.samples.segment(k * kHopSamples, kFrameSamples);
    return frames;
}

SpectrumAnalyzer::SpectrumAnalyzer() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int n = 0; n < kFrameSamples; ++n)
        window_[n] = 0.5 * (1.0 - std::cos(two_pi * n / kFrameSamples));
    for (int f = 0; f < kNumBins; ++f) {
        for (int n = 0; n < kFrameSamples; ++n) {
            const double angle = two_pi * f * n / kFrameSamples;
            cos_basis_(f, n) = std::cos(angle);
            sin_basis_(f, n) = -std::sin(angle);
        }
    }
}

SpectrumSlice SpectrumAnalyzer::power_spectrum(const Eigen::Ref<const Frame>& frame,
                                               int t_index) const {
    const Frame windowed = frame.cwiseProduct(window_);
    const BinVec re = cos_basis_ * windowed;
    const BinVec im = sin_basis_ * windowed;
    SpectrumSlice slice;
    slice.bins = re.cwiseAbs2() + im.cwiseAbs2();
    slice.energy = slice.bins.sum();
    slice.t_index = t_index;
    return slice;
}

SpectrumSlice SpectrumAnalyzer::power_spectrum_checked(const Eigen::VectorXd& frame,
                                                       int t_index) const {
    if (frame.size() != kFrameSamples)
        throw std::invalid_argument("power_spectrum: frame must hold exactly " +
                                    std::to_string(kFrameSamples) + " samples, got " +
                                    std::to_string(frame.size()));
    return power_spectrum(Frame(frame), t_index);
}

UtteranceSpectra SpectrumAnalyzer::analyze(const AudioClip& clip) const {
    if (clip.sample_rate != kSampleRate)
        throw std::invalid_argument("analyze: expected " + std::to_string(kSampleRate) +
                                    " Hz audio, got " + std::to_string(clip.sample_rate) + " Hz");
    UtteranceSpectra spectra;
    const Eigen::Index n_frames = frame_count(clip.samples.size());
    spectra.slices.reserve(static_cast<std::size_t>(n_frames));
    for (Eigen::Index k = 0; k < n_frames; ++k) {
        SpectrumSlice slice = power_spectrum(
            clip.samples.segment(k * kHopSamples, kFrameSamples), static_cast<int>(k));
        spectra.max_bin_power = std::max(spectra.max_bin_power, slice.bins.maxCoeff());
        spectra.slices.push_back(std::move(slice));
    }
    return spectra;
}

}  // namespace hdspk
