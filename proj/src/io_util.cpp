#include "sltm/io_util.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "sltm/errors.hpp"

namespace sltm {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

StageDir::StageDir(const std::filesystem::path& final_dir) : final_dir_(final_dir) {
    std::error_code ec;
    const auto parent = final_dir.has_parent_path() ? final_dir.parent_path()
                                                    : std::filesystem::path(".");
    std::filesystem::create_directories(parent, ec);
    std::mt19937_64 gen(std::random_device{}());
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto candidate = parent / (".stage-" + std::to_string(gen()));
        if (std::filesystem::create_directory(candidate, ec) && !ec) {
            stage_ = std::move(candidate);
            return;
        }
    }
    throw IoError("cannot create staging directory next to " + final_dir.string());
}

StageDir::~StageDir() {
    if (!stage_.empty()) {
        std::error_code ec;
        std::filesystem::remove_all(stage_, ec);
    }
}

void StageDir::commit() {
    if (committed_) return;
    std::error_code ec;
    std::filesystem::create_directories(final_dir_, ec);
    if (ec) throw IoError("cannot create output directory " + final_dir_.string());
    for (const auto& entry : std::filesystem::directory_iterator(stage_)) {
        const auto dest = final_dir_ / entry.path().filename();
        std::filesystem::rename(entry.path(), dest, ec);
        if (ec) throw IoError("cannot move " + entry.path().string() + " to " + dest.string());
    }
    committed_ = true;
}

} // namespace sltm
