#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tarski/word.hpp"

namespace tarski {

enum class Status { pass, fail, inconclusive };

inline std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Failure {
  std::string witness;
  std::string detail;

  friend bool operator==(const Failure&, const Failure&) = default;
};

inline bool canonical_less(const Failure& x, const Failure& y) noexcept {
  if (x.witness != y.witness) return canonical_text_less(x.witness, y.witness);
  return x.detail < y.detail;
}

/// Retained failure witnesses are capped; the total count is always exact.
inline constexpr std::size_t kMaxRetainedFailures = 64;

/**
 * Collects failures, keeping only the canonically smallest kMaxRetainedFailures.
 * Sinks merged in any order produce the same retained set.
 */
class FailureSink {
 public:
  void add(std::string witness, std::string detail) {
    ++count_;
    items_.push_back({std::move(witness), std::move(detail)});
    if (items_.size() >= 4 * kMaxRetainedFailures) normalize();
  }

  void merge(const FailureSink& other) {
    count_ += other.count_;
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    normalize();
  }

  std::uint64_t count() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  std::vector<Failure> sorted() const {
    FailureSink copy = *this;
    copy.normalize();
    return copy.items_;
  }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end(), canonical_less);
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    if (items_.size() > kMaxRetainedFailures) items_.resize(kMaxRetainedFailures);
  }

  std::uint64_t count_ = 0;
  std::vector<Failure> items_;
};

/**
 * Machine-readable record of one verification run.
 *
 * status() is pass iff there are no failures anywhere (including nested
 * sections) and no inconclusive flag; failures dominate inconclusiveness.
 */
struct VerificationReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t items_checked = 0;
  std::vector<Failure> failures;
  std::uint64_t failure_count = 0;
  bool inconclusive = false;
  std::string inconclusive_reason;
  std::vector<std::pair<std::string, std::string>> metrics;
  std::vector<VerificationReport> sections;
  std::int64_t elapsed_ms = 0;

  Status status() const {
    if (has_failures()) return Status::fail;
    if (has_inconclusive()) return Status::inconclusive;
    return Status::pass;
  }
  bool passed() const { return status() == Status::pass; }

  bool has_failures() const {
    if (failure_count != 0) return true;
    return std::any_of(sections.begin(), sections.end(),
                       [](const VerificationReport& s) { return s.has_failures(); });
  }
  bool has_inconclusive() const {
    if (inconclusive) return true;
    return std::any_of(sections.begin(), sections.end(),
                       [](const VerificationReport& s) { return s.has_inconclusive(); });
  }

  void set_param(std::string key, std::string value) { upsert(params, std::move(key), std::move(value)); }
  void set_metric(std::string key, std::string value) { upsert(metrics, std::move(key), std::move(value)); }
  template <class T>
  void set_metric(std::string key, const T& value) {
    std::ostringstream os;
    os << value;
    set_metric(std::move(key), os.str());
  }

  std::string metric(std::string_view key) const {
    for (const auto& [k, v] : metrics)
      if (k == key) return v;
    return {};
  }

  void absorb(const FailureSink& sink) {
    FailureSink merged;
    for (const Failure& f : failures) merged.add(f.witness, f.detail);
    merged.merge(sink);
    failure_count += sink.count();
    failures = merged.sorted();
  }

  void add_failure(std::string witness, std::string detail) {
    FailureSink sink;
    sink.add(std::move(witness), std::move(detail));
    absorb(sink);
  }

  void mark_inconclusive(std::string reason) {
    inconclusive = true;
    if (inconclusive_reason.empty())
      inconclusive_reason = std::move(reason);
    else
      inconclusive_reason += "; " + reason;
  }

 private:
  static void upsert(std::vector<std::pair<std::string, std::string>>& kv, std::string key,
                     std::string value) {
    for (auto& [k, v] : kv)
      if (k == key) {
        v = std::move(value);
        return;
      }
    kv.emplace_back(std::move(key), std::move(value));
  }
};

/// Stopwatch that writes elapsed milliseconds into a report when stopped.
class ReportTimer {
 public:
  ReportTimer() : start_(std::chrono::steady_clock::now()) {}
  void stop(VerificationReport& report) const {
    report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Integers are serialized as decimal strings throughout.
inline nlohmann::ordered_json to_json(const VerificationReport& r, bool include_timing = true) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["status"] = std::string(to_string(r.status()));
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["items_checked"] = std::to_string(r.items_checked);
  j["failure_count"] = std::to_string(r.failure_count);
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const Failure& f : r.failures) failures.push_back({{"witness", f.witness}, {"detail", f.detail}});
  j["failures"] = failures;
  if (r.inconclusive) j["inconclusive_reason"] = r.inconclusive_reason;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  if (!r.sections.empty()) {
    nlohmann::ordered_json sections = nlohmann::ordered_json::array();
    for (const VerificationReport& s : r.sections) sections.push_back(to_json(s, include_timing));
    j["sections"] = sections;
  }
  j["elapsed_ms"] = std::to_string(include_timing ? r.elapsed_ms : 0);
  return j;
}

inline void write_text(std::ostream& os, const VerificationReport& r, bool include_timing = true,
                       int depth = 0) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  os << pad << "[" << to_string(r.status()) << "] " << r.check;
  if (!r.params.empty()) {
    os << " (";
    for (std::size_t i = 0; i < r.params.size(); ++i)
      os << (i ? ", " : "") << r.params[i].first << "=" << r.params[i].second;
    os << ")";
  }
  os << "\n" << pad << "  items checked: " << r.items_checked << ", failures: " << r.failure_count;
  if (include_timing) os << ", elapsed: " << r.elapsed_ms << " ms";
  os << "\n";
  for (const auto& [k, v] : r.metrics) os << pad << "  " << k << ": " << v << "\n";
  if (r.inconclusive) os << pad << "  inconclusive: " << r.inconclusive_reason << "\n";
  for (const Failure& f : r.failures) os << pad << "  FAIL " << f.witness << ": " << f.detail << "\n";
  if (r.failure_count > r.failures.size())
    os << pad << "  ... " << (r.failure_count - r.failures.size()) << " more failures\n";
  for (const VerificationReport& s : r.sections) write_text(os, s, include_timing, depth + 1);
}

}  // namespace tarski
