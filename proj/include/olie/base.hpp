#pragma once

#include <stdexcept>
#include <string>

namespace olie {

/* Every precondition violation or internal inconsistency surfaces as an
 * olie::error.  The CLI maps these to exit code 2. */
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& what) { throw error(what); }

inline void check(bool ok, const std::string& what) {
    if (!ok) fail(what);
}

/* Three-way comparison result.  GT means "left is greater". */
enum class Ordering : int { LT = -1, EQ = 0, GT = 1 };

inline Ordering flip(Ordering o) {
    return static_cast<Ordering>(-static_cast<int>(o));
}

inline const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::LT: return "LT";
        case Ordering::EQ: return "EQ";
        case Ordering::GT: return "GT";
    }
    return "?";
}

}  // namespace olie
