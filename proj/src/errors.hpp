#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mgsim {

// File could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input text is malformed or violates a scenario/config invariant.
// Carries every violation found so callers can report them all at once.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
    explicit ParseError(const std::string& issue)
        : ParseError(std::vector<std::string>{issue}) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += '\n';
            out += s;
        }
        return out;
    }
    std::vector<std::string> issues_;
};

// Simulation state became non-finite.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mgsim
