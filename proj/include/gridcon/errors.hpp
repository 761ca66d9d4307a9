#pragma once

#include <stdexcept>
#include <string>

namespace gridcon {

// Bad caller input: unknown vertex, malformed file, violated precondition.
class input_error : public std::invalid_argument {
public:
    input_error(std::string code, const std::string& what)
        : std::invalid_argument(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// A search budget was exhausted. Distinct from a negative answer: callers
// that get a plain "not found" hold a proof of absence.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// An invariant that is guaranteed by construction failed at runtime.
// Raising this is always a bug detector; nothing catches it to continue.
class internal_error : public std::logic_error {
public:
    internal_error(std::string code, const std::string& what)
        : std::logic_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Outcome of a structural check. Not an error channel: a failed check is a
// regular value carrying the first violated condition.
struct Verdict {
    bool ok = true;
    std::string violation;  // empty iff ok

    static Verdict pass() { return Verdict{}; }
    static Verdict fail(std::string why) { return Verdict{false, std::move(why)}; }
    explicit operator bool() const { return ok; }
};

}  // namespace gridcon
