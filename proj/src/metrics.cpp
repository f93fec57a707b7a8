#include "forgebench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "forgebench/error.hpp"

namespace forgebench {
namespace {

void check_inputs(std::span<const double> real, std::span<const double> fake) {
  if (real.empty() || fake.empty())
    throw Error(ErrorCode::EmptyClass, "AUC needs at least one real and one fake score (got " +
                                           std::to_string(real.size()) + " real, " +
                                           std::to_string(fake.size()) + " fake)");
  for (auto s : real)
    if (std::isnan(s)) throw Error(ErrorCode::InvalidConfig, "NaN score");
  for (auto s : fake)
    if (std::isnan(s)) throw Error(ErrorCode::InvalidConfig, "NaN score");
}

bool failure_heavy(const AucCell& c) {
  const auto total = c.n_real + c.n_fake + c.n_failed;
  return total > 0 && static_cast<double>(c.n_failed) > kMaxFailureFraction * static_cast<double>(total);
}

auto cell_order(const AucCell& c) { return std::tie(c.entry_index, c.op_category, c.severity_label); }

}  // namespace

double auc(std::span<const double> scores_real, std::span<const double> scores_fake) {
  check_inputs(scores_real, scores_fake);
  std::vector<std::pair<double, bool>> all;
  all.reserve(scores_real.size() + scores_fake.size());
  for (auto s : scores_real) all.emplace_back(s, false);
  for (auto s : scores_fake) all.emplace_back(s, true);
  std::sort(all.begin(), all.end());

  // Mid-rank of a tie group occupying [p, p+g) is p + (g+1)/2; twice that is
  // an integer.
  std::uint64_t rank2_fake = 0;
  for (std::size_t p = 0; p < all.size();) {
    std::size_t q = p;
    std::uint64_t fakes = 0;
    while (q < all.size() && all[q].first == all[p].first) fakes += all[q++].second;
    const std::uint64_t g = q - p;
    rank2_fake += fakes * (2 * p + g + 1);
    p = q;
  }
  const std::uint64_t nf = scores_fake.size();
  const std::uint64_t nr = scores_real.size();
  const std::uint64_t u2 = rank2_fake - nf * (nf + 1);
  return static_cast<double>(u2) / static_cast<double>(2 * nf * nr);
}

double auc_pairwise(std::span<const double> scores_real, std::span<const double> scores_fake) {
  check_inputs(scores_real, scores_fake);
  std::uint64_t u2 = 0;
  for (double f : scores_fake)
    for (double r : scores_real) u2 += f > r ? 2 : (f == r ? 1 : 0);
  return static_cast<double>(u2) /
         static_cast<double>(2 * static_cast<std::uint64_t>(scores_fake.size()) * scores_real.size());
}

std::vector<AucCell> group_cells(std::span<const ScoreRecord> records) {
  struct Acc {
    AucCell cell;
    std::vector<double> real, fake;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const auto& r : records) {
    auto [it, fresh] = groups.try_emplace({r.op_category, r.severity_label});
    auto& acc = it->second;
    if (fresh) {
      acc.cell.op_category = r.op_category;
      acc.cell.severity_label = r.severity_label;
      acc.cell.entry_index = r.entry_index;
    }
    acc.cell.entry_index = std::min(acc.cell.entry_index, r.entry_index);
    if (r.failed()) {
      ++acc.cell.n_failed;
    } else if (r.label == Label::real) {
      acc.real.push_back(*r.score);
    } else {
      acc.fake.push_back(*r.score);
    }
  }
  std::vector<AucCell> cells;
  for (auto& [key, acc] : groups) {
    acc.cell.n_real = acc.real.size();
    acc.cell.n_fake = acc.fake.size();
    if (!acc.real.empty() && !acc.fake.empty()) acc.cell.auc = auc(acc.real, acc.fake);
    acc.cell.reliable = acc.cell.auc.has_value() && !failure_heavy(acc.cell);
    cells.push_back(std::move(acc.cell));
  }
  std::sort(cells.begin(), cells.end(),
            [](const AucCell& a, const AucCell& b) { return cell_order(a) < cell_order(b); });
  return cells;
}

Report aggregate(std::span<const AucCell> cells_in, const RunMetadata& meta) {
  Report rep;
  rep.meta = meta;
  rep.cells.assign(cells_in.begin(), cells_in.end());
  std::sort(rep.cells.begin(), rep.cells.end(),
            [](const AucCell& a, const AucCell& b) { return cell_order(a) < cell_order(b); });

  std::map<std::string, std::pair<double, std::size_t>> per_cat;
  double sum_distorted = 0.0, sum_all = 0.0;
  std::size_t n_distorted = 0, n_all = 0;
  for (const auto& c : rep.cells) {
    if (!c.auc) {
      rep.undefined_cells.push_back(c.op_category + "/" + c.severity_label);
      continue;
    }
    sum_all += *c.auc;
    ++n_all;
    if (c.op_category == kUnalteredCategory) {
      if (!rep.unaltered_auc) rep.unaltered_auc = c.auc;
      continue;
    }
    sum_distorted += *c.auc;
    ++n_distorted;
    auto& pc = per_cat[c.op_category];
    pc.first += *c.auc;
    ++pc.second;
  }
  for (const auto& [cat, pc] : per_cat) rep.category_averages[cat] = pc.first / static_cast<double>(pc.second);
  if (n_distorted) rep.overall_average = sum_distorted / static_cast<double>(n_distorted);
  if (n_all) rep.overall_average_with_unaltered = sum_all / static_cast<double>(n_all);
  if (!rep.category_averages.empty()) {
    double s = 0.0;
    for (const auto& [cat, v] : rep.category_averages) s += v;
    rep.overall_category_mean = s / static_cast<double>(rep.category_averages.size());
  }
  return rep;
}

Report build_report(const RecordsFile& records) {
  const auto cells = group_cells(records.records);
  return aggregate(cells, records.meta);
}

bool has_failure_overflow(const Report& report) {
  return std::any_of(report.cells.begin(), report.cells.end(), failure_heavy);
}

}  // namespace forgebench
