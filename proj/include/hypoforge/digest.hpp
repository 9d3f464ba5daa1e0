#pragma once
// FNV-1a digests. Scripted-backend fixtures are keyed by digest of the full
// prompt pair, so any template change invalidates the fixture loudly.

#include <cstdint>
#include <string>
#include <string_view>

namespace hypoforge {

inline uint64_t fnv1a64(std::string_view data, uint64_t seed = 14695981039346656037ull) {
    uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

// Digest of a (system prompt, user prompt) pair. The 0x1e separator keeps
// boundary-shifted pairs from colliding.
inline std::string prompt_digest(std::string_view system_prompt, std::string_view user_prompt) {
    uint64_t h = fnv1a64(system_prompt);
    h = fnv1a64("\x1e", h);
    h = fnv1a64(user_prompt, h);
    return hex16(h);
}

inline std::string text_digest(std::string_view text) {
    return hex16(fnv1a64(text));
}

}  // namespace hypoforge
