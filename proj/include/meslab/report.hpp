#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace meslab {

/// Accumulates the outcome of a verification sweep. Violations are recorded,
/// not thrown, so a sweep always runs to completion and reports everything.
class CheckReport {
public:
    explicit CheckReport(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    std::int64_t checks() const { return checks_; }
    const std::vector<std::string>& violations() const { return violations_; }
    bool passed() const { return violations_.empty(); }

    void check(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) violations_.push_back(what);
    }

    /// Variant that builds the message only on failure (hot loops).
    template <typename MessageFn>
        requires std::is_invocable_r_v<std::string, MessageFn>
    void check(bool ok, MessageFn&& message) {
        ++checks_;
        if (!ok) violations_.push_back(message());
    }

    void merge(const CheckReport& other) {
        checks_ += other.checks_;
        for (const auto& v : other.violations())
            violations_.push_back(other.name() + ": " + v);
    }

private:
    std::string name_;
    std::int64_t checks_ = 0;
    std::vector<std::string> violations_;
};

}  // namespace meslab
