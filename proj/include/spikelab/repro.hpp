#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spikelab {

struct ReproOptions {
  std::uint64_t seed = 0;
  std::optional<std::size_t> samples; // overrides every sampled count; 0 skips search rows
  std::size_t workers = 1;
  double grid_step = 1e-3;             // p grid of the non-strategic bound
};

enum class RowStatus { pass, fail, skipped };
std::string to_string(RowStatus s);

struct ClaimRow {
  std::string id;    // "1", "5a", "S", ...
  std::string claim;
  double bound = 0.0;
  double achieved = 0.0;
  RowStatus status = RowStatus::pass;
  std::string detail;
};

inline constexpr int kCriterionCount = 12;

/// Rows of acceptance criterion 1..12. Throws InvalidInput for other ids.
std::vector<ClaimRow> run_criterion(int id, const ReproOptions& opts);
/// F(t) + F(n - t) = 1 for every n <= 1000.
ClaimRow spike_cdf_symmetry_row();
/// Every criterion plus the symmetry row.
std::vector<ClaimRow> repro_all(const ReproOptions& opts);

/// True when no row failed (skipped rows do not fail).
bool all_passed(const std::vector<ClaimRow>& rows);
/// "PASS 1   spike upper bound ... bound=2 achieved=1.9 | detail"
std::string format_row(const ClaimRow& row);
std::string claims_csv_header();
std::string claims_csv_row(const ClaimRow& row);

} // namespace spikelab
