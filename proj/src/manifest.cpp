#include <openssl/evp.h>

#include <array>
#include <stdexcept>

#include "dephasing/cli.hpp"
#include "dephasing/io.hpp"

namespace dephasing::io {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xF];
    }
    return hex;
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".manifest.json");
    return p;
}

nlohmann::json make_manifest(std::string_view subcommand, const nlohmann::json& config,
                             const std::filesystem::path& artifact, std::string_view contents) {
    nlohmann::json m;
    m["tool"] = std::string(cli::kToolName);
    m["version"] = std::string(cli::kToolVersion);
    m["subcommand"] = std::string(subcommand);
    m["config"] = config;
    m["artifacts"] = nlohmann::json::array({{
        {"path", artifact.generic_string()},
        {"bytes", contents.size()},
        {"sha256", sha256_hex(contents)},
    }});
    return m;
}

}  // namespace dephasing::io
