#include "manifest.hpp"

#include "sxai/error.hpp"
#include "sxai/exports.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace sxai::cli {

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

RunManifest::RunManifest(std::string command, const RunConfig& config)
    : command_(std::move(command)), config_(config) {}

void RunManifest::input(const std::filesystem::path& path) {
    inputs_.emplace_back(path.generic_string(), file_sha256(path));
}

void RunManifest::artifact(const std::filesystem::path& path) { artifacts_.push_back(path.filename().string()); }

std::filesystem::path RunManifest::write() const {
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [key, value] : config_.resolved) config[key] = value;
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& [path, digest] : inputs_) inputs.push_back({{"path", path}, {"sha256", digest}});
    const nlohmann::json manifest{{"schema", "sxai-run/1"},
                                  {"command", command_},
                                  {"seed", config_.seed},
                                  {"config", config},
                                  {"inputs", inputs},
                                  {"artifacts", artifacts_}};
    const auto path = config_.out / fmt::format("run_{}.json", command_);
    write_json(path, manifest);
    return path;
}

}  // namespace sxai::cli
