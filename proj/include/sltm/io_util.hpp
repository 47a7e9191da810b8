#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sltm {

// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// Staging directory for atomic scenario output: artifacts are written here and
// renamed into the destination only after the whole run succeeded.
class StageDir {
public:
    explicit StageDir(const std::filesystem::path& final_dir);
    ~StageDir();

    StageDir(const StageDir&) = delete;
    StageDir& operator=(const StageDir&) = delete;

    const std::filesystem::path& path() const { return stage_; }

    // Moves every staged file into the destination, creating it if needed.
    void commit();

private:
    std::filesystem::path final_dir_;
    std::filesystem::path stage_;
    bool committed_ = false;
};

} // namespace sltm
