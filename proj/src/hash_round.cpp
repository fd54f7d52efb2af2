#include "cround/hash_round.hpp"

#include <cstdio>
#include <memory>

#include <openssl/evp.h>

namespace cround {

Digest sha256(std::string_view data) {
    Digest out{};
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size())
        throw Error("SHA-256 failed");
    return out;
}

std::string to_hex(const Digest& d) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (auto b : d) {
        s += digits[b >> 4];
        s += digits[b & 15];
    }
    return s;
}

std::string canonical_center(const Scheme& scheme, const Point& center) {
    std::string s = to_string(scheme.family()) + "|" + std::to_string(scheme.colors()) + "|";
    char buf[64];
    for (std::size_t i = 0; i < center.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12f", center[i]);
        std::string v = buf;
        if (v.find_first_not_of("-0.") == std::string::npos && v[0] == '-') v.erase(0, 1);
        if (i) s += ',';
        s += v;
    }
    return s;
}

HashedRound hash_round(const Scheme& scheme, const Point& x, const DigestFn& fn) {
    RoundResult r = scheme.encode(x);
    return {fn(canonical_center(scheme, r.center)), r.color};
}

HashedRound hash_decoded(const Scheme& scheme, const Point& y, Color c, const DigestFn& fn) {
    RoundResult r = scheme.decode(y, c);
    return {fn(canonical_center(scheme, r.center)), c};
}

}  // namespace cround
