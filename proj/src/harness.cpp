#include "fracfem/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "fracfem/errors.hpp"

namespace fracfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Scanner for the expression grammar.
class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& text) : s_(text) {}

  PowerSum parse() {
    PowerSum sum;
    skip();
    if (at_end()) fail("empty expression");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    sum += sign * term();
    while (true) {
      skip();
      if (at_end()) break;
      const char op = take();
      if (op != '+' && op != '-') fail(std::string("unexpected '") + op + "'");
      sum += (op == '-' ? -1.0 : 1.0) * term();
    }
    return sum;
  }

 private:
  PowerSum term() {
    skip();
    double coef = 1.0;
    bool have_coef = false;
    if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
      coef = number();
      have_coef = true;
      skip();
      if (!at_end() && peek() == '*') {
        take();
        skip();
        if (at_end() || peek() != 'x') fail("expected x after '*'");
      }
    }
    if (!at_end() && peek() == 'x') {
      take();
      double p = 1.0;
      skip();
      if (!at_end() && peek() == '^') {
        take();
        p = exponent();
      }
      if (!(p > -1.0)) fail("exponent must exceed -1");
      return PowerSum::left(coef, p);
    }
    if (!have_coef) fail("expected a number or x");
    return PowerSum::constant(coef);
  }

  double exponent() {
    skip();
    if (!at_end() && peek() == '(') {
      take();
      const double v = signed_number();
      skip();
      if (at_end() || take() != ')') fail("missing ')'");
      return v;
    }
    return signed_number();
  }

  double signed_number() {
    skip();
    double sign = 1.0;
    if (!at_end() && (peek() == '+' || peek() == '-')) sign = take() == '-' ? -1.0 : 1.0;
    return sign * number();
  }

  // Unsigned decimal, optionally a fraction n/d.
  double number() {
    skip();
    const double num = decimal();
    skip();
    if (!at_end() && peek() == '/') {
      take();
      const double den = decimal();
      if (den == 0.0) fail("division by zero");
      return num / den;
    }
    return num;
  }

  double decimal() {
    skip();
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) take();
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      const std::size_t mark = pos_;
      take();
      if (!at_end() && (peek() == '+' || peek() == '-')) take();
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = mark;
      } else {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) take();
      }
    }
    const std::string lit = s_.substr(start, pos_ - start);
    if (lit.empty()) fail("expected a number");
    char* end = nullptr;
    const double v = std::strtod(lit.c_str(), &end);
    if (end != lit.c_str() + lit.size() || !std::isfinite(v)) fail("bad number '" + lit + "'");
    return v;
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char take() { return s_[pos_++]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

DerivativeKind parse_derivative(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "rl" || t == "riemann-liouville" || t == "riemann_liouville") return DerivativeKind::RiemannLiouville;
  if (t == "caputo") return DerivativeKind::Caputo;
  throw ConfigError("unknown derivative '" + text + "' (expected rl or caputo)");
}

ExampleKind parse_example(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "a") return ExampleKind::A;
  if (t == "b") return ExampleKind::B;
  if (t == "c") return ExampleKind::C;
  if (t == "custom") return ExampleKind::Custom;
  throw ConfigError("unknown example '" + text + "' (expected a, b, c or custom)");
}

bool parse_bool(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "yes" || t == "true" || t == "1" || t == "on") return true;
  if (t == "no" || t == "false" || t == "0" || t == "off") return false;
  throw ConfigError("expected yes or no, got '" + text + "'");
}

const char* example_name(ExampleKind e) {
  switch (e) {
    case ExampleKind::A: return "a";
    case ExampleKind::B: return "b";
    case ExampleKind::C: return "c";
    case ExampleKind::Custom: return "custom";
  }
  return "?";
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string short_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// 7/4 rather than 1.75 when alpha is a simple fraction.
std::string alpha_label(double a) {
  for (int d = 2; d <= 12; ++d) {
    const double n = std::round(a * d);
    if (std::abs(a * d - n) < 1e-9) {
      int num = static_cast<int>(n), den = d;
      for (int g = 2; g <= den; ++g)
        while (num % g == 0 && den % g == 0) {
          num /= g;
          den /= g;
        }
      if (den > 1) return std::to_string(num) + "/" + std::to_string(den);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", a);
  return buf;
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
  return std::string(buf, end);
}

ExampleId to_example_id(ExampleKind e) {
  switch (e) {
    case ExampleKind::A: return ExampleId::A;
    case ExampleKind::B: return ExampleId::B;
    default: return ExampleId::C;
  }
}

Potential make_potential(const PowerSum& q) {
  if (q.empty()) return Potential::zero();
  return Potential([q](double x) { return q(x); });
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("expected a number, got nothing");
  std::size_t slash = t.find('/');
  auto one = [&](const std::string& part) {
    const std::string p = trim(part);
    char* end = nullptr;
    const double v = std::strtod(p.c_str(), &end);
    if (p.empty() || end != p.c_str() + p.size() || !std::isfinite(v))
      throw ConfigError("bad number '" + text + "'");
    return v;
  };
  if (slash == std::string::npos) return one(t);
  const double den = one(t.substr(slash + 1));
  if (den == 0.0) throw ConfigError("bad number '" + text + "': division by zero");
  return one(t.substr(0, slash)) / den;
}

std::vector<int> parse_levels(const std::string& text) {
  const std::string t = trim(text);
  auto integer = [&](const std::string& part) {
    const std::string p = trim(part);
    if (p.empty() || !std::all_of(p.begin(), p.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ConfigError("bad level list '" + text + "'");
    return std::stoi(p);
  };
  std::vector<int> out;
  if (const auto dots = t.find(".."); dots != std::string::npos) {
    const int lo = integer(t.substr(0, dots));
    const int hi = integer(t.substr(dots + 2));
    if (hi < lo) throw ConfigError("bad level range '" + text + "'");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
  } else {
    for (const auto& item : split(t, ',')) out.push_back(integer(item));
  }
  return out;
}

PowerSum parse_power_expression(const std::string& text) {
  return ExpressionParser(text).parse();
}

void StudyConfig::validate() const {
  if (derivatives.empty()) throw ConfigError("no derivative given");
  if (std::set<DerivativeKind>(derivatives.begin(), derivatives.end()).size() != derivatives.size())
    throw ConfigError("derivative listed twice");
  if (alphas.empty()) throw ConfigError("no alpha given");
  for (double a : alphas)
    if (!(a > 1.0 && a < 2.0)) throw ConfigError("alpha " + format_double(a) + " outside (1,2)");
  if (std::set<double>(alphas.begin(), alphas.end()).size() != alphas.size())
    throw ConfigError("alpha listed twice");
  if (levels.empty()) throw ConfigError("no levels given");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0 || levels[i] > 9)
      throw ConfigError("level " + std::to_string(levels[i]) + " outside 0..9");
    if (i > 0 && levels[i] <= levels[i - 1]) throw ConfigError("levels must be ascending");
  }
  if (example == ExampleKind::Custom && source.empty())
    throw ConfigError("example = custom needs a nonzero source");
  if (example != ExampleKind::Custom && !source_text.empty())
    throw ConfigError("source is only used with example = custom");
  for (const auto& t : source.terms())
    if (!(t.exponent > -1.0)) throw ConfigError("source exponents must exceed -1");
  for (const auto& t : q.terms())
    if (t.exponent < 0.0) throw ConfigError("q must be bounded (nonnegative exponents)");
  if (!(tol >= 1e-15 && tol <= 1e-3)) throw ConfigError("tol must lie in [1e-15, 1e-3]");
  if (output_dir.empty()) throw ConfigError("empty output directory");
}

std::string StudyConfig::echo() const {
  std::ostringstream out;
  out << "derivative = ";
  for (std::size_t i = 0; i < derivatives.size(); ++i)
    out << (i ? ", " : "") << to_string(derivatives[i]);
  out << "\nalpha = ";
  for (std::size_t i = 0; i < alphas.size(); ++i) out << (i ? ", " : "") << format_double(alphas[i]);
  out << "\nexample = " << example_name(example);
  if (example == ExampleKind::Custom) out << "\nsource = " << source.to_string();
  out << "\nlevels = ";
  for (std::size_t i = 0; i < levels.size(); ++i) out << (i ? "," : "") << levels[i];
  out << "\nq = " << (q.empty() ? std::string("0") : q.to_string());
  out << "\ntol = " << format_double(tol);
  out << "\ncoefficient = " << (show_coefficient ? "yes" : "no") << "\n";
  return out.str();
}

StudyConfig parse_config(const std::string& text) {
  StudyConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      if (key == "derivative") {
        cfg.derivatives.clear();
        for (const auto& d : split(value, ',')) cfg.derivatives.push_back(parse_derivative(d));
      } else if (key == "alpha") {
        cfg.alphas.clear();
        for (const auto& a : split(value, ',')) cfg.alphas.push_back(parse_number(a));
      } else if (key == "example") {
        cfg.example = parse_example(value);
      } else if (key == "source") {
        cfg.source_text = value;
        cfg.source = parse_power_expression(value);
      } else if (key == "levels") {
        cfg.levels = parse_levels(value);
      } else if (key == "q") {
        cfg.q_text = value;
        const std::string t = lower(value);
        cfg.q = (t == "zero" || t == "0") ? PowerSum() : parse_power_expression(value);
      } else if (key == "out") {
        cfg.output_dir = value;
      } else if (key == "tol") {
        cfg.tol = parse_number(value);
      } else if (key == "coefficient") {
        cfg.show_coefficient = parse_bool(value);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

unsigned threads_from_environment() {
  const char* value = std::getenv("FRACFEM_THREADS");
  if (!value || !*value) return 0;
  const std::string t = trim(value);
  if (t.empty() || t.size() > 6 ||
      !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ConfigError(std::string("FRACFEM_THREADS must be a nonnegative integer, got '") + value + "'");
  return static_cast<unsigned>(std::stoul(t));
}

std::optional<TheoreticalRates> theoretical_rates(ExampleKind example, DerivativeKind kind,
                                                  double alpha) {
  double s;
  switch (example) {
    case ExampleKind::A: s = 1.5; break;
    case ExampleKind::B: s = 0.5; break;
    case ExampleKind::C: s = 0.25; break;
    default: return std::nullopt;
  }
  const double energy = kind == DerivativeKind::RiemannLiouville
                            ? (alpha - 1.0) / 2.0
                            : std::min(2.0 - alpha / 2.0, alpha / 2.0 + s);
  return TheoreticalRates{energy + (alpha - 1.0) / 2.0, energy};
}

ConvergenceReport run_study(const StudyConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  ConvergenceReport report;
  report.config = config;
  report.exact_errors = config.q.empty();

  struct Task {
    LevelResult result;
    std::optional<PiecewiseLinear> solution;
  };
  std::vector<Task> tasks;
  for (auto kind : config.derivatives)
    for (double a : config.alphas)
      for (int k : config.levels) {
        const int m = 10 << k;
        tasks.push_back({LevelResult{kind, a, k, m, 1.0 / m, std::nullopt, 0.0, ""}, std::nullopt});
      }

  const Potential potential = make_potential(config.q);
  auto work = [&](Task& task) {
    LevelResult& r = task.result;
    try {
      const FracOrder alpha = FracOrder::pde(r.alpha);
      PowerSum f, exact;
      if (config.example == ExampleKind::Custom) {
        f = config.source;
        if (report.exact_errors) exact = primal_solution(f, alpha, r.derivative);
      } else {
        auto ex = example_suite(to_example_id(config.example), alpha, r.derivative);
        f = ex.source;
        exact = ex.exact;
      }
      const Mesh mesh(r.m);
      const Formulation form(r.derivative, alpha, potential);
      LinearSystem system = assemble_system(mesh, form, f);
      const Eigen::VectorXd& c = solve(system);
      const double scale = system.matrix.cwiseAbs().rowwise().sum().maxCoeff() *
                               c.cwiseAbs().maxCoeff() +
                           system.rhs.cwiseAbs().maxCoeff();
      r.residual = (system.matrix * c - system.rhs).cwiseAbs().maxCoeff() / scale;
      std::vector<double> values(r.m + 1, 0.0);
      for (int i = 0; i < mesh.interior(); ++i) values[i + 1] = c(i);
      task.solution.emplace(r.m, std::move(values));
      if (report.exact_errors) r.record = measure(exact, *task.solution, alpha, r.derivative, config.tol);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << to_string(r.derivative) << ", alpha " << alpha_label(r.alpha) << ", k " << r.k
          << ": " << e.what();
      r.failure = msg.str();
    }
  };

  // Largest meshes first so the pool drains evenly; each task writes only
  // its own slot, so the schedule cannot change any result.
  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return tasks[x].result.m > tasks[y].result.m; });
  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < order.size();) work(tasks[order[i]]);
  };
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
  }

  // Without an exact solution, measure each level against the next one.
  const std::size_t nl = config.levels.size();
  if (!report.exact_errors) {
    for (std::size_t b = 0; b < tasks.size(); b += nl)
      for (std::size_t i = 0; i + 1 < nl; ++i) {
        Task& coarse = tasks[b + i];
        const Task& fine = tasks[b + i + 1];
        if (!coarse.solution || !fine.solution) continue;
        try {
          const auto d = difference_on_fine(*coarse.solution, *fine.solution);
          const auto n = discrete_norms(d, FracOrder::pde(coarse.result.alpha));
          ErrorRecord rec;
          rec.m = coarse.result.m;
          rec.h = coarse.result.h;
          rec.l2_error = n.l2;
          rec.halpha_error = n.energy;
          rec.seminorm = n.energy / std::sqrt(std::cos((1.0 - coarse.result.alpha / 2.0) * std::numbers::pi));
          rec.coefficient = std::nan("");
          coarse.result.record = rec;
        } catch (const std::exception& e) {
          coarse.result.failure = e.what();
        }
      }
  }

  for (auto& t : tasks) {
    if (!t.result.failure.empty()) report.partial = true;
    report.levels.push_back(std::move(t.result));
  }

  for (std::size_t b = 0; b < report.levels.size(); b += nl) {
    RateBlock block{report.levels[b].derivative, report.levels[b].alpha, {}, {}, std::nullopt, std::nullopt};
    block.l2_step.assign(nl, std::nullopt);
    block.halpha_step.assign(nl, std::nullopt);
    for (std::size_t i = 1; i < nl; ++i) {
      const auto& prev = report.levels[b + i - 1];
      const auto& cur = report.levels[b + i];
      if (!prev.record || !cur.record || cur.k != prev.k + 1) continue;
      auto step = [](double e0, double e1) -> std::optional<double> {
        if (!(e0 > 0.0) || !(e1 > 0.0)) return std::nullopt;
        return std::log2(e0 / e1);
      };
      block.l2_step[i] = step(prev.record->l2_error, cur.record->l2_error);
      block.halpha_step[i] = step(prev.record->halpha_error, cur.record->halpha_error);
    }
    // Fit over the trailing run of measured levels, at most four.
    std::vector<double> h, l2, en;
    for (std::size_t i = nl; i-- > 0 && h.size() < 4;) {
      const auto& r = report.levels[b + i];
      if (!r.record) {
        if (h.empty()) continue;
        break;
      }
      h.insert(h.begin(), r.h);
      l2.insert(l2.begin(), r.record->l2_error);
      en.insert(en.begin(), r.record->halpha_error);
    }
    if (h.size() >= 2) {
      try {
        block.l2_fit = fitted_rate(h, l2, 4);
      } catch (const Error&) {
      }
      try {
        block.halpha_fit = fitted_rate(h, en, 4);
      } catch (const Error&) {
      }
    }
    report.rates.push_back(std::move(block));
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string format_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "derivative,alpha,example,k,m,h,l2_error,halpha_error,coefficient,l2_rate_step,"
         "halpha_rate_step\n";
  const std::string ex = example_name(report.config.example);
  const std::size_t nl = report.config.levels.size();
  auto opt = [](const std::optional<double>& v) { return v ? sci(*v) : std::string(); };
  for (std::size_t b = 0, block = 0; b < report.levels.size(); b += nl, ++block) {
    const RateBlock& rates = report.rates[block];
    for (std::size_t i = 0; i < nl; ++i) {
      const LevelResult& r = report.levels[b + i];
      out << to_string(r.derivative) << ',' << sci(r.alpha) << ',' << ex << ',' << r.k << ','
          << r.m << ',' << sci(r.h) << ',';
      if (r.record) {
        out << sci(r.record->l2_error) << ',' << sci(r.record->halpha_error) << ','
            << (report.exact_errors ? sci(r.record->coefficient) : std::string());
      } else {
        out << ",,";
      }
      out << ',' << opt(rates.l2_step[i]) << ',' << opt(rates.halpha_step[i]) << '\n';
    }
    out << to_string(rates.derivative) << ',' << sci(rates.alpha) << ',' << ex << ",fit,,,,,,"
        << opt(rates.l2_fit) << ',' << opt(rates.halpha_fit) << '\n';
  }
  return out.str();
}

std::string format_text(const ConvergenceReport& report) {
  const StudyConfig& cfg = report.config;
  std::ostringstream out;
  out << "fracfem " << kVersion << "\n\n" << cfg.echo() << '\n';
  if (report.exact_errors) {
    out << "Errors e = u - u_h against the exact solution on h = 1/(10*2^k).\n";
  } else {
    out << "q is nonzero and no exact solution is available: each column k holds the\n"
           "difference u_h(k) - u_h(k+1) to the next finer level.\n";
  }
  out << "H^{a/2} is the energy norm sqrt(A(e,e)).  rate: least squares over the last\n"
         "four levels";
  if (cfg.example != ExampleKind::Custom) out << ", regularity prediction in brackets";
  out << ".\n";

  const std::size_t nl = cfg.levels.size();
  const int cell = 9;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string header = pad("alpha", 7) + pad("norm", 9);
  for (int k : cfg.levels) header += pad("k=" + std::to_string(k), cell + 1);
  header += "rate";

  for (std::size_t b = 0, block = 0; b < report.levels.size(); b += nl, ++block) {
    const RateBlock& rates = report.rates[block];
    if (block == 0 || report.levels[b].derivative != report.levels[b - nl].derivative) {
      out << '\n' << to_string(report.levels[b].derivative) << ", example "
          << example_name(cfg.example) << '\n' << header << '\n'
          << std::string(header.size() + 12, '-') << '\n';
    }
    const auto theory = theoretical_rates(cfg.example, rates.derivative, rates.alpha);
    auto row = [&](const std::string& label, auto value, const std::optional<double>& fit,
                   std::optional<double> predicted, bool first) {
      out << pad(first ? alpha_label(rates.alpha) : "", 7) << pad(label, 9);
      for (std::size_t i = 0; i < nl; ++i) {
        const LevelResult& r = report.levels[b + i];
        std::string v = r.record ? value(*r.record) : (r.failure.empty() ? "-" : "failed");
        out << pad(v, cell + 1);
      }
      if (fit) {
        out << fixed2(*fit);
        if (predicted) out << " (" << fixed2(*predicted) << ')';
      }
      out << '\n';
    };
    row("L2", [](const ErrorRecord& r) { return short_sci(r.l2_error); }, rates.l2_fit,
        theory ? std::optional<double>(theory->l2) : std::nullopt, true);
    row("H^{a/2}", [](const ErrorRecord& r) { return short_sci(r.halpha_error); },
        rates.halpha_fit, theory ? std::optional<double>(theory->energy) : std::nullopt, false);
    if (cfg.show_coefficient && report.exact_errors)
      row("coef", [](const ErrorRecord& r) { return short_sci(r.coefficient); }, std::nullopt,
          std::nullopt, false);
  }

  out << "\nrelative algebraic residual, largest over all levels: ";
  double worst = 0.0;
  for (const auto& r : report.levels) worst = std::max(worst, r.residual);
  out << short_sci(worst) << '\n';

  if (report.partial) {
    out << "\nPARTIAL REPORT, failed levels:\n";
    for (const auto& r : report.levels)
      if (!r.failure.empty()) out << "  " << r.failure << '\n';
  }
  return out.str();
}

void emit_tables(const ConvergenceReport& report) {
  const auto& dir = report.config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& body) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    out.flush();
    if (!out) throw Error("cannot write " + path.string());
  };
  write("report.csv", format_csv(report));
  write("report.txt", format_text(report));
}

StudyConfig paper_preset(int table) {
  StudyConfig cfg;
  cfg.alphas = {1.75, 1.5, 4.0 / 3.0};
  cfg.levels = {1, 2, 3, 4, 5, 6, 7};
  const auto rl = DerivativeKind::RiemannLiouville;
  const auto caputo = DerivativeKind::Caputo;
  switch (table) {
    case 1: cfg.example = ExampleKind::A; cfg.derivatives = {rl}; break;
    case 2: cfg.example = ExampleKind::A; cfg.derivatives = {caputo}; break;
    case 3:
      cfg.example = ExampleKind::A;
      cfg.derivatives = {rl, caputo};
      cfg.alphas = {1.5};
      cfg.show_coefficient = true;
      break;
    case 4: cfg.example = ExampleKind::B; cfg.derivatives = {rl}; break;
    case 5: cfg.example = ExampleKind::B; cfg.derivatives = {caputo}; break;
    case 6: cfg.example = ExampleKind::C; cfg.derivatives = {rl}; break;
    case 7: cfg.example = ExampleKind::C; cfg.derivatives = {caputo}; break;
    default: throw ConfigError("no preset for table " + std::to_string(table) + " (expected 1..7)");
  }
  cfg.output_dir = "paper-table-" + std::to_string(table);
  return cfg;
}

}  // namespace fracfem
