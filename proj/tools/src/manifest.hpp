#pragma once

#include "config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sxai::cli {

// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

// Records what a command read and wrote. Written last as run_<command>.json.
class RunManifest {
public:
    RunManifest(std::string command, const RunConfig& config);

    void input(const std::filesystem::path& path);
    // Artifact names are relative to the output directory.
    void artifact(const std::filesystem::path& path);

    std::filesystem::path write() const;

private:
    std::string command_;
    const RunConfig& config_;
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::string> artifacts_;
};

}  // namespace sxai::cli
