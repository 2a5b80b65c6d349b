#pragma once

#include <cstdint>
#include <filesystem>

namespace hdspk {

// Parameters of the generated test corpus. Each "speaker" is a fixed triple
// of formant-like band-pass resonances driven by white noise; speakers are
// separated by shifting all three resonances one spectrum bin (200 Hz) per
// speaker index. Contexts differ in playback gain and in how much hard
// silence pads each utterance, which is what the weighting modes are supposed
// to be robust against.
struct SynthConfig {
    int n_speakers = 10;
    int n_contexts = 3;
    int utterances_per_context = 5;
    double utterance_seconds = 3.0;
    std::uint64_t seed = 1234;  // drives noise, formant jitter, nothing else
};

// Writes root/<speaker>/<context>/<utterance>.wav for every combination.
// Layout matches what index_dataset expects; with the default config every
// context holds the same number of utterances, so the split rule reserves the
// lexicographically first context (the clean, unpadded one) for testing.
void write_synthetic_corpus(const std::filesystem::path& root, const SynthConfig& cfg);

}  // namespace hdspk
