#include "hdspk/dsp.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace hdspk {

namespace {

std::uint32_t read_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(static_cast<std::uint32_t>(p[0]) |
                                      (static_cast<std::uint32_t>(p[1]) << 8));
}

void put_u32le(std::ofstream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff),
                                static_cast<unsigned char>((v >> 16) & 0xff),
                                static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u16le(std::ofstream& out, std::uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw WavError(WavError::Kind::kNotAWav, path.string() + ": cannot open file");

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw WavError(WavError::Kind::kNotAWav, path.string() + ": not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint16_t audio_format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
    const unsigned char* data_ptr = nullptr;
    std::size_t data_len = 0;

    // Walk chunks; chunks are word-aligned.
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* chunk_id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t chunk_size = read_u32le(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + chunk_size > bytes.size())
            throw WavError(WavError::Kind::kTruncated,
                           path.string() + ": chunk extends past end of file");
        if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
            if (chunk_size < 16)
                throw WavError(WavError::Kind::kNotAWav, path.string() + ": fmt chunk too short");
            audio_format = read_u16le(bytes.data() + body);
            channels = read_u16le(bytes.data() + body + 2);
            sample_rate = read_u32le(bytes.data() + body + 4);
            bits_per_sample = read_u16le(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(chunk_id, "data", 4) == 0) {
            data_ptr = bytes.data() + body;
            data_len = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1u);
    }

    if (!have_fmt || data_ptr == nullptr)
        throw WavError(WavError::Kind::kNotAWav, path.string() + ": missing fmt or data chunk");
    if (audio_format != 1 || bits_per_sample != 16)
        throw WavError(WavError::Kind::kUnsupportedCodec,
                       path.string() + ": only PCM signed 16-bit is supported (format " +
                           std::to_string(audio_format) + ", " + std::to_string(bits_per_sample) +
                           " bits)");
    if (channels != 1)
        throw WavError(WavError::Kind::kUnsupportedChannels,
                       path.string() + ": expected mono, got " + std::to_string(channels) +
                           " channels");
    if (sample_rate != static_cast<std::uint32_t>(kSampleRate))
        throw WavError(WavError::Kind::kUnsupportedSampleRate,
                       path.string() + ": expected 16000 Hz, got " + std::to_string(sample_rate) +
                           " Hz");

    const std::size_t n = data_len / 2;
    AudioClip clip;
    clip.sample_rate = kSampleRate;
    clip.samples.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint16_t raw = read_u16le(data_ptr + 2 * i);
        const std::int16_t sample = static_cast<std::int16_t>(raw);
        clip.samples[static_cast<Eigen::Index>(i)] = static_cast<double>(sample) / 32768.0;
    }
    return clip;
}

void write_wav_pcm16(const std::filesystem::path& path, const Eigen::VectorXd& samples,
                     int sample_rate) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_wav_pcm16: cannot open " + path.string());

    const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    out.write("RIFF", 4);
    put_u32le(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32le(out, 16);
    put_u16le(out, 1);  // PCM
    put_u16le(out, 1);  // mono
    put_u32le(out, static_cast<std::uint32_t>(sample_rate));
    put_u32le(out, static_cast<std::uint32_t>(sample_rate * 2));
    put_u16le(out, 2);   // block align
    put_u16le(out, 16);  // bits per sample
    out.write("data", 4);
    put_u32le(out, data_bytes);
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        double x = samples[i];
        if (x > 1.0) x = 1.0;
        if (x < -1.0) x = -1.0;
        long v = std::lround(x * 32767.0);
        put_u16le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }
    if (!out) throw std::runtime_error("write_wav_pcm16: write failed for " + path.string());
}

}  // namespace hdspk
