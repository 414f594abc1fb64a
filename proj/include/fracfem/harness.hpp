#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracfem/analytic.hpp"
#include "fracfem/assembly.hpp"
#include "fracfem/metrics.hpp"

namespace fracfem {

inline constexpr const char* kVersion = "1.0.0";

/// Parses a source or potential expression: a sum of terms c, x, x^p or
/// c*x^p with real c and p.  Numbers may be written as fractions (7/4) and
/// exponents may be parenthesised, x^(-1/4).  Throws ConfigError.
PowerSum parse_power_expression(const std::string& text);

/// Parses "1.5", "3/2" and similar.  Throws ConfigError.
double parse_number(const std::string& text);

/// Parses "1..7", "3" or "1,2,5".  Throws ConfigError.
std::vector<int> parse_levels(const std::string& text);

enum class ExampleKind { A, B, C, Custom };

struct StudyConfig {
  std::vector<DerivativeKind> derivatives{DerivativeKind::RiemannLiouville};
  std::vector<double> alphas{1.5};
  ExampleKind example = ExampleKind::A;
  std::string source_text;  // custom source, as written
  PowerSum source;          // custom source, parsed
  std::vector<int> levels{1, 2, 3, 4, 5, 6, 7};
  std::string q_text = "0";
  PowerSum q;  // empty means q = 0
  std::filesystem::path output_dir = "fracfem-out";
  double tol = kDefaultTol;
  bool show_coefficient = false;
  /// Worker threads; 0 picks the hardware concurrency.  Not part of the
  /// echoed configuration, since it must not change any output byte.
  unsigned threads = 0;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
  /// Canonical key = value lines, in a fixed order.
  std::string echo() const;
};

/// key = value lines, '#' starts a comment.  Recognised keys: derivative,
/// alpha, example, source, levels, q, out, tol, coefficient.
StudyConfig parse_config(const std::string& text);
StudyConfig load_config(const std::filesystem::path& path);

/// FRACFEM_THREADS, 0 when unset.  Throws ConfigError on garbage.
unsigned threads_from_environment();

/// Rates the regularity theory predicts for the three model problems:
///   energy  Riemann-Liouville (alpha-1)/2,  Caputo min(2 - alpha/2, alpha/2 + s)
///   L2      energy + (alpha-1)/2
/// with s = 3/2, 1/2, 1/4 the Sobolev index limit of the sources a, b, c.
struct TheoreticalRates {
  double l2;
  double energy;
};
std::optional<TheoreticalRates> theoretical_rates(ExampleKind example, DerivativeKind kind,
                                                  double alpha);

struct LevelResult {
  DerivativeKind derivative;
  double alpha;
  int k;
  int m;
  double h;
  /// Errors against the exact solution when q = 0; against the next finer
  /// level otherwise (absent on the finest one).
  std::optional<ErrorRecord> record;
  double residual = 0.0;  // relative algebraic residual of the solve
  std::string failure;    // empty on success
};

struct RateBlock {
  DerivativeKind derivative;
  double alpha;
  std::vector<std::optional<double>> l2_step;      // one per level, empty on the first
  std::vector<std::optional<double>> halpha_step;
  std::optional<double> l2_fit;                    // least squares over the last four levels
  std::optional<double> halpha_fit;
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<LevelResult> levels;  // ordered by derivative, alpha, k
  std::vector<RateBlock> rates;     // ordered by derivative, alpha
  bool exact_errors = true;         // false when measured against finer levels
  bool partial = false;
  double wall_seconds = 0.0;        // not written to any report file
};

ConvergenceReport run_study(const StudyConfig& config);

std::string format_csv(const ConvergenceReport& report);
std::string format_text(const ConvergenceReport& report);

/// Writes report.csv and report.txt into config.output_dir (created when
/// missing).  Throws fracfem::Error with the path on I/O failure.
void emit_tables(const ConvergenceReport& report);

/// Configuration reproducing one of the published tables:
///   1 a/RL  2 a/Caputo  3 singular coefficient  4 b/RL  5 b/Caputo  6 c/RL  7 c/Caputo
StudyConfig paper_preset(int table);

}  // namespace fracfem
