#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdspk/encoder.hpp"
#include "hdspk/glvq.hpp"
#include "hdspk/vsa.hpp"

namespace hdspk {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vectors are stored as float32: profiles are sums of ±1 terms whose useful
// precision is far below single precision, and halving the file size doubles
// the speakers that fit in cache during classification.
struct ContextRecord {
    std::string context_id;
    std::uint64_t ngram_count = 0;  // N-grams accumulated into `vec`
    Vec<float> vec;                 // context profile V_{s,c}
};

struct SpeakerRecord {
    std::string speaker_id;
    Vec<float> profile;    // V_s = sum of context profiles
    Vec<float> prototype;  // unit-normalized centroid, possibly GLVQ-refined
    std::vector<ContextRecord> contexts;  // sorted by context id
};

struct Model {
    static constexpr std::uint16_t kFormatVersion = 1;

    EncoderConfig encoder;               // includes both generator seeds
    std::vector<SpeakerRecord> speakers; // sorted by speaker id

    int dim() const { return encoder.dim; }
    int speaker_count() const { return static_cast<int>(speakers.size()); }

    // Profile + prototype per speaker, plus every stored context profile.
    std::uint64_t stored_parameter_count() const;

    // Prototype rows in speaker order, as doubles, for training/classifying.
    PrototypeSet prototype_set() const;
    void set_prototypes(const PrototypeSet& protos);  // writes refined rows back
};

// Little-endian binary format, magic "HDSPK1". Round-trips are bit-exact:
// load(save(m)) reproduces every float and every string.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace hdspk
