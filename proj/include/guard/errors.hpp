#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace guard {

/// Scenario or configuration problem. Carries every issue found, not just
/// the first, so callers can report them all at once.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    explicit ValidationError(std::string issue)
        : ValidationError(std::vector<std::string>{std::move(issue)}) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out.empty() ? std::string("validation failed") : out;
    }

    std::vector<std::string> issues_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File read/write failure. Message always names the path.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& what, const std::string& path)
        : std::runtime_error(what + ": " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace guard
