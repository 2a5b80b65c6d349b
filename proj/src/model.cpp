#include "hdspk/model.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace hdspk {

namespace {

constexpr char kMagic[6] = {'H', 'D', 'S', 'P', 'K', '1'};
constexpr std::uint32_t kMaxStringBytes = 1u << 20;

// Explicit little-endian packing so files are identical across hosts.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) u8(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.append(s);
    }
    void vec(const Vec<float>& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) f32(v[i]);
    }

    const std::string& bytes() const { return buf_; }

private:
    std::string buf_;
};

class ByteReader {
public:
    ByteReader(const std::string& bytes, std::string origin)
        : bytes_(bytes), origin_(std::move(origin)) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }
    std::uint16_t u16() {
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(u8()) << (8 * i);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t len = u32();
        if (len > kMaxStringBytes) fail("implausible string length");
        need(len);
        std::string s = bytes_.substr(pos_, len);
        pos_ += len;
        return s;
    }
    Vec<float> vec(int dim) {
        Vec<float> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = f32();
        return v;
    }
    void expect_magic() {
        need(sizeof(kMagic));
        if (std::memcmp(bytes_.data() + pos_, kMagic, sizeof(kMagic)) != 0)
            fail("bad magic, not a speaker model file");
        pos_ += sizeof(kMagic);
    }
    bool exhausted() const { return pos_ == bytes_.size(); }
    [[noreturn]] void fail(const std::string& why) const { throw ModelError(origin_ + ": " + why); }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) fail("truncated file");
    }

    const std::string& bytes_;
    std::string origin_;
    std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t Model::stored_parameter_count() const {
    std::uint64_t count = 0;
    for (const auto& spk : speakers) {
        count += 2ull * static_cast<std::uint64_t>(encoder.dim);  // profile + prototype
        count += spk.contexts.size() * static_cast<std::uint64_t>(encoder.dim);
    }
    return count;
}

PrototypeSet Model::prototype_set() const {
    PrototypeSet protos;
    protos.prototypes.resize(static_cast<Eigen::Index>(speakers.size()), encoder.dim);
    for (std::size_t s = 0; s < speakers.size(); ++s) {
        protos.labels.push_back(speakers[s].speaker_id);
        protos.prototypes.row(static_cast<Eigen::Index>(s)) =
            speakers[s].prototype.cast<double>().transpose();
    }
    return protos;
}

void Model::set_prototypes(const PrototypeSet& protos) {
    if (protos.size() != speaker_count() || protos.dim() != encoder.dim)
        throw std::invalid_argument("set_prototypes: shape does not match the model");
    for (std::size_t s = 0; s < speakers.size(); ++s) {
        if (protos.labels[s] != speakers[s].speaker_id)
            throw std::invalid_argument("set_prototypes: speaker order mismatch at " +
                                        protos.labels[s]);
        speakers[s].prototype =
            protos.prototypes.row(static_cast<Eigen::Index>(s)).cast<float>().transpose();
    }
}

void save_model(const Model& model, const std::filesystem::path& path) {
    model.encoder.validate();

    ByteWriter out;
    for (char c : kMagic) out.u8(static_cast<std::uint8_t>(c));
    out.u16(Model::kFormatVersion);
    out.u32(static_cast<std::uint32_t>(model.encoder.dim));
    out.u32(static_cast<std::uint32_t>(model.encoder.ngram_order));
    out.u8(static_cast<std::uint8_t>(model.encoder.weighting));
    out.f64(model.encoder.alpha);
    out.f64(model.encoder.p_target);
    out.u64(model.encoder.seed_memory_seed);
    out.u64(model.encoder.permutation_seed);
    out.u32(static_cast<std::uint32_t>(model.speakers.size()));

    for (const auto& spk : model.speakers) {
        if (spk.profile.size() != model.encoder.dim || spk.prototype.size() != model.encoder.dim)
            throw ModelError("save_model: vector dimension mismatch for speaker " +
                             spk.speaker_id);
        out.str(spk.speaker_id);
        out.vec(spk.profile);
        out.vec(spk.prototype);
        out.u32(static_cast<std::uint32_t>(spk.contexts.size()));
        for (const auto& ctx : spk.contexts) {
            if (ctx.vec.size() != model.encoder.dim)
                throw ModelError("save_model: vector dimension mismatch for context " +
                                 spk.speaker_id + "/" + ctx.context_id);
            out.str(ctx.context_id);
            out.u64(ctx.ngram_count);
            out.vec(ctx.vec);
        }
    }

    // Atomic replace: write to a sibling temp file, then rename over the target.
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) throw ModelError("save_model: cannot open " + tmp.string());
        file.write(out.bytes().data(), static_cast<std::streamsize>(out.bytes().size()));
        if (!file) throw ModelError("save_model: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ModelError("load_model: cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    ByteReader in(bytes, path.string());
    in.expect_magic();
    const std::uint16_t version = in.u16();
    if (version != Model::kFormatVersion)
        in.fail("unsupported format version " + std::to_string(version));

    Model model;
    model.encoder.dim = static_cast<int>(in.u32());
    model.encoder.ngram_order = static_cast<int>(in.u32());
    const std::uint8_t weighting = in.u8();
    if (weighting > 2) in.fail("unknown weighting mode " + std::to_string(weighting));
    model.encoder.weighting = static_cast<WeightingMode>(weighting);
    model.encoder.alpha = in.f64();
    model.encoder.p_target = in.f64();
    model.encoder.seed_memory_seed = in.u64();
    model.encoder.permutation_seed = in.u64();
    try {
        model.encoder.validate();
    } catch (const std::invalid_argument& e) {
        in.fail(std::string("invalid header: ") + e.what());
    }

    const std::uint32_t n_speakers = in.u32();
    model.speakers.reserve(n_speakers);
    for (std::uint32_t s = 0; s < n_speakers; ++s) {
        SpeakerRecord spk;
        spk.speaker_id = in.str();
        spk.profile = in.vec(model.encoder.dim);
        spk.prototype = in.vec(model.encoder.dim);
        const std::uint32_t n_contexts = in.u32();
        spk.contexts.reserve(n_contexts);
        for (std::uint32_t c = 0; c < n_contexts; ++c) {
            ContextRecord ctx;
            ctx.context_id = in.str();
            ctx.ngram_count = in.u64();
            ctx.vec = in.vec(model.encoder.dim);
            spk.contexts.push_back(std::move(ctx));
        }
        model.speakers.push_back(std::move(spk));
    }
    if (!in.exhausted()) in.fail("trailing bytes after the last speaker record");
    return model;
}

}  // namespace hdspk
