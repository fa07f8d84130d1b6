#pragma once

#include <ramcat/category_io.hpp>
#include <ramcat/fincat.hpp>

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ramcat {

/// Lowercase hex SHA-256 of a byte string.
[[nodiscard]] inline auto sha256_hex(std::string_view bytes) -> std::string
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

/// Digest of the canonical text serialization, so it does not depend on how the category
/// was produced.
[[nodiscard]] inline auto category_digest(const FiniteCategory& cat) -> std::string
{
    return sha256_hex(format_category(cat));
}

} // namespace ramcat
