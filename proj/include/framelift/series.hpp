#pragma once

#include "framelift/coorbit.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace framelift {

/// One size of a scaling study (N for Gabor, R for Fock).
struct SeriesEntry {
  double size = 0.0;
  std::string size_label;
  std::vector<std::pair<std::string, double>> metadata;
  bool ok = false;
  std::string failure;
  std::optional<LiftingReport> report;

  double meta(const std::string& key) const {
    for (const auto& kv : metadata)
      if (kv.first == key) return kv.second;
    throw std::out_of_range("SeriesEntry: no metadata " + key);
  }
};

struct ExperimentSeries {
  std::string kind;
  std::string mu_label;
  std::string m_label;
  double max_growth = 1.5;
  std::vector<SeriesEntry> entries;
  std::vector<double> growth;  // condition(next) / condition(current), consecutive entries

  bool all_ok() const {
    return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const SeriesEntry& e) { return e.ok; });
  }
  bool any_ok() const {
    return std::any_of(entries.begin(), entries.end(), [](const SeriesEntry& e) { return e.ok; });
  }
  /// Lower constant positive everywhere and growth below max_growth per step.
  bool uniform() const {
    if (!all_ok()) return false;
    return std::all_of(growth.begin(), growth.end(), [this](double g) { return g < max_growth; });
  }

  void compute_growth() {
    growth.clear();
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
      const auto& a = entries[i];
      const auto& b = entries[i + 1];
      if (a.ok && b.ok) growth.push_back(b.report->condition / a.report->condition);
    }
  }
};

/// out[i] = fn(i) for i < count on up to `threads` workers. Results land by
/// index, so the output never depends on the schedule. The first exception
/// (lowest index) is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min<std::size_t>(threads < 1 ? 1 : threads, count));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace framelift
