#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "brixkit/dataset.hpp"
#include "brixkit/image.hpp"

namespace testutil {

namespace fs = std::filesystem;

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        const unsigned id = counter.fetch_add(1);
        path_ = fs::temp_directory_path() /
                ("brixkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(id));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path file(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Run the brixkit binary (path injected by CMake) with output capture.
/// env_prefix is prepended verbatim, e.g. "BRIXKIT_JOBS=2 ".
inline CliResult run_cli(const std::string& args, const TempDir& scratch,
                         const std::string& env_prefix = "") {
    const fs::path out_path = scratch.file("cli_stdout.txt");
    const fs::path err_path = scratch.file("cli_stderr.txt");
    const std::string cmd = env_prefix + std::string(BRIXKIT_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

inline brixkit::RasterImage constant_image(int w, int h, std::uint8_t r, std::uint8_t g,
                                           std::uint8_t b) {
    brixkit::RasterImage img(w, h);
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] = r;
        img.data[i + 1] = g;
        img.data[i + 2] = b;
    }
    return img;
}

/// Deterministic pseudo-random image (no library RNG involved).
inline brixkit::RasterImage noise_image(int w, int h, std::uint64_t seed) {
    brixkit::RasterImage img(w, h);
    std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    for (auto& byte : img.data) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        byte = static_cast<std::uint8_t>(state >> 56);
    }
    return img;
}

/// Manifest row with sensible defaults, for fixture building.
inline brixkit::SampleRecord make_record(const std::string& id, char atomic,
                                         const std::string& device, const std::string& format,
                                         double brix, const std::string& image_path = "") {
    brixkit::SampleRecord r;
    r.sample_id = id;
    r.image_path = image_path.empty() ? "images/" + id + ".png" : image_path;
    r.atomic_split = atomic;
    r.year = atomic <= 'D' ? 2021 : 2022;
    r.device = device;
    r.image_format = format;
    r.brix_mean = brix;
    r.gray_card = format == "raw_wb";
    return r;
}

} // namespace testutil
