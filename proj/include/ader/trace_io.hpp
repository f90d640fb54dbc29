#ifndef ADER_TRACE_IO_HPP
#define ADER_TRACE_IO_HPP

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ader/comparators.hpp"
#include "ader/loss.hpp"
#include "ader/runner.hpp"

namespace ader {

/**
 * All floating-point output uses 17 significant digits so that parsing
 * the text recovers the exact double and reruns diff byte-for-byte.
 */
inline std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return std::string(buffer);
}

inline void check_csv_token(const std::string& token, const char* what) {
  if (token.find_first_of(",\"\n\r") != std::string::npos)
    throw std::invalid_argument(std::string(what) + " may not contain commas, quotes, or newlines: '" +
                                token + "'");
}

/**
 * Per-round trace. Columns: round (1-based), loss, cum_loss, one
 * cum_regret_<name> column per registered comparator, path_length_so_far
 * (movement of the play sequence), grad_queries (cumulative). LF line
 * endings, UTF-8.
 */
inline void write_trace_csv(std::ostream& out, const RegretTrace& trace,
                            const std::vector<LossRound>& losses,
                            const std::vector<std::pair<std::string, ComparatorSequence>>&
                                comparators) {
  require(static_cast<int>(losses.size()) == trace.horizon,
          "write_trace_csv: losses must match the trace horizon");
  for (const auto& [name, u] : comparators) {
    check_csv_token(name, "comparator name");
    require(static_cast<int>(u.size()) == trace.horizon,
            "write_trace_csv: comparator length must equal the horizon");
  }
  out << "round,loss,cum_loss";
  for (const auto& [name, u] : comparators) out << ",cum_regret_" << name;
  out << ",path_length_so_far,grad_queries\n";

  std::vector<double> cum_regret(comparators.size(), 0.0);
  for (int t = 0; t < trace.horizon; ++t) {
    const std::size_t ut = static_cast<std::size_t>(t);
    out << (t + 1) << ',' << format_double(trace.losses[ut]) << ','
        << format_double(trace.cum_losses[ut]);
    for (std::size_t c = 0; c < comparators.size(); ++c) {
      cum_regret[c] += trace.losses[ut] - losses[ut].value(comparators[c].second[ut]);
      out << ',' << format_double(cum_regret[c]);
    }
    out << ',' << format_double(trace.play_path[ut]) << ',' << trace.cum_gradient_queries[ut]
        << '\n';
  }
}

/** One summary line per (algorithm, environment, T, seed, comparator). */
struct SummaryRow {
  std::string algorithm;
  std::string environment;
  int horizon = 0;
  int dimension = 0;
  std::uint64_t seed = 0;
  std::string comparator;
  double regret = 0.0;
  double path = 0.0;
  double dynamic_path = 0.0;
  int bound_id = 0;
  double bound = 0.0;
  double slack = 0.0;
  double ratio = 0.0;
  long long gradient_queries = 0;
  long long value_queries = 0;
};

inline std::string summary_csv_header() {
  return "algorithm,environment,T,dim,seed,comparator,regret,path,dynamic_path,bound_id,bound,"
         "slack,ratio,grad_queries,value_queries";
}

inline void write_summary_row(std::ostream& out, const SummaryRow& row) {
  check_csv_token(row.algorithm, "algorithm name");
  check_csv_token(row.environment, "environment name");
  check_csv_token(row.comparator, "comparator name");
  out << row.algorithm << ',' << row.environment << ',' << row.horizon << ',' << row.dimension
      << ',' << row.seed << ',' << row.comparator << ',' << format_double(row.regret) << ','
      << format_double(row.path) << ',' << format_double(row.dynamic_path) << ',' << row.bound_id
      << ',' << format_double(row.bound) << ',' << format_double(row.slack) << ','
      << format_double(row.ratio) << ',' << row.gradient_queries << ',' << row.value_queries
      << '\n';
}

/** Long-form scaling table: one row per (algorithm, T), seed-averaged. */
struct SweepRow {
  std::string algorithm;
  int horizon = 0;
  double path = 0.0;    // mean P_T over seeds
  double regret = 0.0;  // mean over seeds
  double bound = 0.0;   // mean over seeds
  double ratio = 0.0;   // mean regret / sqrt(T (1 + mean P_T))
};

inline std::string sweep_csv_header() { return "algorithm,T,P_T,regret,bound,ratio"; }

inline void write_sweep_row(std::ostream& out, const SweepRow& row) {
  check_csv_token(row.algorithm, "algorithm name");
  out << row.algorithm << ',' << row.horizon << ',' << format_double(row.path) << ','
      << format_double(row.regret) << ',' << format_double(row.bound) << ','
      << format_double(row.ratio) << '\n';
}

/** Hard-instance summary: one row per algorithm, seed-averaged. */
struct LowerBoundRow {
  std::string algorithm;
  int horizon = 0;
  double tau_requested = 0.0;
  double tau_realized = 0.0;  // mean comparator path length over seeds
  double mean_regret = 0.0;
  double scale = 0.0;  // G * sqrt(T (D^2 + D tau))
  double ratio = 0.0;  // mean_regret / scale
};

inline std::string lower_bound_csv_header() {
  return "algorithm,T,tau_requested,tau_realized,mean_regret,scale,ratio";
}

inline void write_lower_bound_row(std::ostream& out, const LowerBoundRow& row) {
  check_csv_token(row.algorithm, "algorithm name");
  out << row.algorithm << ',' << row.horizon << ',' << format_double(row.tau_requested) << ','
      << format_double(row.tau_realized) << ',' << format_double(row.mean_regret) << ','
      << format_double(row.scale) << ',' << format_double(row.ratio) << '\n';
}

/**
 * Write via a temporary file in the target directory plus rename, so
 * concurrent workers never expose partially written files.
 */
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const unsigned stamp = counter.fetch_add(1, std::memory_order_relaxed);
  std::filesystem::path temp = path;
  temp += ".tmp" + std::to_string(stamp);
  {
    std::ofstream out(temp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + temp.string() + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + temp.string() + "'");
  }
  std::filesystem::rename(temp, path);
}

}  // namespace ader

#endif  // ADER_TRACE_IO_HPP
