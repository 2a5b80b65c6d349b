// Shared helpers for the test suites: scoped temp directories and raw file
// writing for hand-built fixtures.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace hdspk::test {

class TempDir {
 public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("hdspk-test-" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create a temp directory under " + base.string());
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
    std::filesystem::path path_;
};

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed to write " + path.string());
}

// Little-endian appenders for building binary fixtures byte by byte.
inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

inline void put_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(tag[i]));
}

// Minimal canonical-layout WAV builder so loader tests control every byte.
inline std::vector<std::uint8_t> build_wav(std::uint16_t format_code, std::uint16_t channels,
                                           std::uint32_t sample_rate, std::uint16_t bits,
                                           const std::vector<std::int16_t>& samples) {
    std::vector<std::uint8_t> data;
    for (std::int16_t s : samples) put_u16(data, static_cast<std::uint16_t>(s));

    std::vector<std::uint8_t> out;
    put_tag(out, "RIFF");
    put_u32(out, static_cast<std::uint32_t>(4 + 8 + 16 + 8 + data.size()));
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, format_code);
    put_u16(out, channels);
    put_u32(out, sample_rate);
    put_u32(out, sample_rate * channels * bits / 8);
    put_u16(out, static_cast<std::uint16_t>(channels * bits / 8));
    put_u16(out, bits);
    put_tag(out, "data");
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    out.insert(out.end(), data.begin(), data.end());
    return out;
}

}  // namespace hdspk::test
