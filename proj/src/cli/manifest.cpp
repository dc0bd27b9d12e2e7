// Copyright 2026 The lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "lightcone/error.hpp"
#include "lightcone/pipeline.hpp"

namespace lightcone::cli {

namespace {

class Sha256 {
  public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        require(ctx_ != nullptr && EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) == 1,
                ErrorCode::io, "sha256: digest initialisation failed");
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256 &) = delete;
    Sha256 &operator=(const Sha256 &) = delete;

    void update(const void *data, std::size_t len) {
        require(EVP_DigestUpdate(ctx_, data, len) == 1, ErrorCode::io, "sha256: update failed");
    }
    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        require(EVP_DigestFinal_ex(ctx_, md.data(), &len) == 1, ErrorCode::io,
                "sha256: finalisation failed");
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        for (unsigned int k = 0; k < len; ++k) {
            out += digits[md[k] >> 4];
            out += digits[md[k] & 15];
        }
        return out;
    }

  private:
    EVP_MD_CTX *ctx_;
};

} // namespace

std::string sha256_hex(std::span<const unsigned char> bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::io, "cannot read " + path.string());
    Sha256 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    require(in.eof(), ErrorCode::io, "failed reading " + path.string());
    return h.hex();
}

nlohmann::json to_json(const RunManifest &m) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto &f : m.files) {
        files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    }
    return {{"config_hash", m.config_hash},
            {"version", m.version},
            {"wall_clock_seconds", m.wall_clock_seconds},
            {"config", m.effective_config},
            {"files", std::move(files)},
            {"warnings", m.warnings}};
}

std::vector<std::string> verify_manifest(const std::filesystem::path &dir) {
    std::ifstream in(dir / "manifest.json");
    require(static_cast<bool>(in), ErrorCode::io, "cannot open " + (dir / "manifest.json").string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::io, std::string("malformed manifest: ") + e.what());
    }
    std::vector<std::string> bad;
    for (const auto &f : doc.at("files")) {
        const std::string rel = f.at("path").get<std::string>();
        const auto path = dir / rel;
        std::error_code ec;
        if (!std::filesystem::is_regular_file(path, ec) ||
            sha256_file(path) != f.at("sha256").get<std::string>()) {
            bad.push_back(rel);
        }
    }
    return bad;
}

int exit_code(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::config_parse:
    case ErrorCode::config_validation:
    case ErrorCode::invalid_argument:
    case ErrorCode::memory_cap:
        return 2;
    case ErrorCode::io:
        return 4;
    default:
        return 3;
    }
}

std::string_view software_version() noexcept { return LIGHTCONE_VERSION; }

} // namespace lightcone::cli
