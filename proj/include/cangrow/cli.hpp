#pragma once

// The cangrow command-line front end: argument parsing, dispatch over the
// ground field, JSON and table output, the on-disk resolution cache and
// run-record replay. run_command is the whole tool; main() only forwards.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cangrow/algebra.hpp"
#include "cangrow/criteria.hpp"
#include "cangrow/errors.hpp"
#include "cangrow/growth.hpp"
#include "cangrow/module.hpp"
#include "cangrow/resolution.hpp"
#include "cangrow/ringspec.hpp"

namespace cangrow::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kOk = 0, kInputError = 1, kBudgetExhausted = 2, kFinding = 3 };

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

/// Everything a run depends on. Ring files are stored by content so a record
/// can be replayed without them.
struct Inputs {
  std::string command;
  std::string ring_text, ring2_text;
  std::string module = "canonical";
  std::string module2;
  std::string field;
  std::size_t steps = 8;
  std::uint64_t seed = 1;
  std::size_t samples = 0;  // 0: the scan kind's default
  std::uint64_t budget = WorkBudget::kDefaultLimit;
  std::string scan = "b1b0";
  bool differentials = false;
  bool verify = false;
  std::string cache_dir;  // advisory, not part of the record

  json to_json() const {
    json j;
    j["command"] = command;
    j["ring"] = ring_text;
    j["ring2"] = ring2_text;
    j["module"] = module;
    j["module2"] = module2;
    j["field"] = field;
    j["steps"] = steps;
    j["seed"] = seed;
    j["samples"] = samples;
    j["budget"] = budget;
    j["scan"] = scan;
    j["differentials"] = differentials;
    j["verify"] = verify;
    return j;
  }

  static Inputs from_json(const json& j) {
    Inputs in;
    in.command = j.at("command").get<std::string>();
    in.ring_text = j.at("ring").get<std::string>();
    in.ring2_text = j.at("ring2").get<std::string>();
    in.module = j.at("module").get<std::string>();
    in.module2 = j.at("module2").get<std::string>();
    in.field = j.at("field").get<std::string>();
    in.steps = j.at("steps").get<std::size_t>();
    in.seed = j.at("seed").get<std::uint64_t>();
    in.samples = j.at("samples").get<std::size_t>();
    in.budget = j.at("budget").get<std::uint64_t>();
    in.scan = j.at("scan").get<std::string>();
    in.differentials = j.at("differentials").get<bool>();
    in.verify = j.at("verify").get<bool>();
    return in;
  }
};

inline FieldSpec parse_field_override(const std::string& s) {
  std::string digits = s;
  if (s == "Q") return FieldSpec::rationals();
  if (!digits.empty() && digits[0] == 'F') digits.erase(0, 1);
  if (digits.empty() || digits.size() > 10 || digits.find_first_not_of("0123456789") != std::string::npos ||
      std::stoull(digits) >= (1ull << 31))
    throw InvalidArgument("--field expects Q, F<p> or a prime p below 2^31, got '" + s + "'");
  return FieldSpec::prime_field(static_cast<std::uint32_t>(std::stoull(digits)));
}

/// A --ring argument is a file path, or the spec itself when it contains '{'.
inline std::string read_ring_argument(const std::string& arg) {
  if (arg.find('{') != std::string::npos) return arg;
  std::ifstream f(arg);
  if (!f) throw InvalidArgument("cannot read ring file '" + arg + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---- JSON pieces ----

inline json rational_json(const mpq_class& q) { return q.get_str(); }

template <Field F>
json ring_json(const ArtinAlgebra<F>& R) {
  auto p = R.profile();
  json j;
  j["spec"] = R.spec_text();
  j["field"] = R.field_spec().name();
  j["dim"] = p.dim_k;
  j["hilbert"] = p.hilbert;
  j["embedding_dim"] = p.embedding_dim;
  j["socle_dim"] = p.socle_dim;
  j["m2_dim"] = p.m2_dim;
  j["nil_index"] = p.nil_index;
  j["graded"] = R.graded();
  j["gorenstein"] = R.is_gorenstein();
  return j;
}

template <Field F>
json module_json(const PresentedModule<F>& M, const std::string& spec) {
  json j;
  j["spec"] = spec;
  j["mu"] = M.num_generators();
  j["relations"] = M.num_relations();
  j["length"] = M.length();
  j["free"] = M.is_free();
  return j;
}

inline json growth_json(const GrowthReport& g) {
  json j;
  if (g.recurrence) {
    json coeffs = json::array();
    for (const auto& c : g.recurrence->coeffs) coeffs.push_back(c.get_str());
    j["recurrence"] = {{"coefficients", coeffs}, {"from", g.recurrence->n0}};
  } else {
    j["recurrence"] = nullptr;
  }
  j["curvature_low"] = rational_json(g.curvature_low);
  j["curvature_high"] = rational_json(g.curvature_high);
  j["curvature_low_decimal"] = g.low();
  j["curvature_high_decimal"] = g.high();
  j["curvature_exact"] = g.curvature_exact ? json(g.curvature_exact->get_str()) : json(nullptr);
  j["curvature_polynomial"] = g.curvature_polynomial.empty() ? json(nullptr) : json(qpoly::to_string(g.curvature_polynomial));
  j["curvature_source"] = g.curvature_source;
  j["classification"] = to_string(g.classification);
  j["strictly_increasing_from"] = g.strictly_increasing ? json(*g.strictly_increasing) : json(nullptr);
  j["exponential_margin"] = rational_json(g.options.exponential_margin);
  j["isolation_width"] = rational_json(g.options.isolation_width);
  return j;
}

template <Field F>
std::string element_string(const ArtinAlgebra<F>& R, const SparseVec<typename F::value_type>& v) {
  std::vector<Term<F>> terms;
  for (std::size_t k = 0; k < v.size(); ++k) terms.push_back({R.basis()[v.index[k]], v.value[k]});
  return R.poly_ring().to_string(R.poly_ring().from_terms(std::move(terms)));
}

/// d_i as its columns; each column lists its nonzero ring entries by row.
template <Field F>
json differential_json(const ArtinAlgebra<F>& R, const std::vector<SparseVec<typename F::value_type>>& d, std::size_t rows,
                       std::size_t step) {
  std::size_t n = R.dim();
  json cols = json::array();
  for (const auto& col : d) {
    json entries = json::array();
    std::size_t e = 0;
    while (e < col.size()) {
      std::size_t g = col.index[e] / n;
      SparseVec<typename F::value_type> entry;
      while (e < col.size() && col.index[e] / n == g) {
        entry.push(static_cast<Index>(col.index[e] % n), col.value[e]);
        ++e;
      }
      entries.push_back({{"row", g}, {"entry", element_string(R, entry)}});
    }
    cols.push_back(entries);
  }
  return {{"step", step}, {"rows", rows}, {"cols", d.size()}, {"columns", cols}};
}

// ---- resolution cache ----
//
// Text format, one file per key:
//   cangrow-resolution 1
//   key <sha256>
//   field <F32003|Q>
//   ring-dim <n>
//   b0 <b0>
//   terminated <0|1>
//   differentials <count>
//   then per differential "d <i> <rows> <cols>" followed by one line per
//   column: "<nnz> <index> <value> ...", indices in R^{rows} coordinates
//   (generator * n + basis index), values as integers or fractions;
//   closed by "end".

template <Field F>
typename F::value_type parse_scalar(const F& k, const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw CacheCorrupt("bad scalar '" + s + "'");
  q.canonicalize();
  if (q.get_den() == 0) throw CacheCorrupt("zero denominator");
  return k.div(k.from_mpz(q.get_num()), k.from_mpz(q.get_den()));
}

template <Field F>
class ResolutionCache {
 public:
  using Vec = SparseVec<typename F::value_type>;

  ResolutionCache(std::string dir, std::ostream& warn) : dir_(std::move(dir)), warn_(warn) {}

  bool enabled() const { return !dir_.empty(); }

  static std::string key(const ArtinAlgebra<F>& R, const std::string& module_spec) {
    return sha256_hex("cangrow-resolution 1\n" + R.spec_text() + "\n" + module_spec + "\n" + R.field_spec().name());
  }

  /// A resolution of M with at least `steps` steps, reusing a cached prefix
  /// when one validates and storing the extension.
  Resolution<F> resolve(const PresentedModule<F>& M, const std::string& module_spec, std::size_t steps,
                        std::uint64_t budget) {
    if (!enabled()) {
      Resolution<F> r(M);
      r.extend(steps, budget);
      return r;
    }
    std::string k = key(*M.ring(), module_spec);
    auto path = std::filesystem::path(dir_) / (k + ".res");
    std::size_t loaded = 0;
    std::optional<Resolution<F>> res;
    if (std::filesystem::exists(path)) {
      try {
        res = load(path, k, M);
        loaded = res->length();
      } catch (const CacheCorrupt& e) {
        warn_ << "warning: cache entry " << path.string() << " is corrupt (" << e.what() << "); recomputing\n";
      }
    }
    if (!res) res.emplace(M);
    res->extend(steps, budget);
    if (res->length() > loaded || !std::filesystem::exists(path)) store(path, k, *res);
    return std::move(*res);
  }

  Resolution<F> load(const std::filesystem::path& path, const std::string& k, const PresentedModule<F>& M) const {
    const auto& A = *M.ring();
    const F& field = A.field();
    std::size_t n = A.dim();
    std::ifstream in(path);
    if (!in) throw CacheCorrupt("unreadable");
    auto expect = [&](const std::string& word) {
      std::string w;
      if (!(in >> w) || w != word) throw CacheCorrupt("expected '" + word + "'");
    };
    auto number = [&]() {
      std::string w;
      if (!(in >> w) || w.empty() || w.size() > 19 || w.find_first_not_of("0123456789") != std::string::npos)
        throw CacheCorrupt("expected a count");
      return static_cast<std::size_t>(std::stoull(w));
    };
    expect("cangrow-resolution");
    expect("1");
    expect("key");
    expect(k);
    expect("field");
    expect(A.field_spec().name());
    expect("ring-dim");
    if (number() != n) throw CacheCorrupt("ring dimension mismatch");
    expect("b0");
    std::size_t b0 = number();
    if (b0 != M.num_generators()) throw CacheCorrupt("b0 mismatch");
    expect("terminated");
    std::size_t term = number();
    if (term > 1) throw CacheCorrupt("bad terminated flag");
    expect("differentials");
    std::size_t count = number();
    std::vector<std::vector<Vec>> diffs;
    std::size_t rows_expected = b0;
    for (std::size_t i = 1; i <= count; ++i) {
      expect("d");
      if (number() != i) throw CacheCorrupt("differential out of order");
      std::size_t rows = number(), cols = number();
      if (rows != rows_expected) throw CacheCorrupt("differential shapes do not chain");
      std::vector<Vec> d(cols);
      for (auto& col : d) {
        std::size_t nnz = number();
        for (std::size_t e = 0; e < nnz; ++e) {
          std::size_t idx = number();
          std::string val;
          if (!(in >> val)) throw CacheCorrupt("truncated column");
          if (idx >= rows * n || (!col.empty() && idx <= col.index.back())) throw CacheCorrupt("bad index");
          if (idx % n == 0) throw CacheCorrupt("entry outside the maximal ideal");
          auto v = parse_scalar(field, val);
          if (field.is_zero(v)) throw CacheCorrupt("stored zero");
          col.push(static_cast<Index>(idx), v);
        }
      }
      diffs.push_back(std::move(d));
      rows_expected = cols;
    }
    expect("end");
    // d_{i-1} d_i = 0 on up to 64 evenly spaced columns of each d_i.
    for (std::size_t i = 2; i <= diffs.size(); ++i) {
      const auto& d = diffs[i - 1];
      Accumulator<F> acc(field, std::max<std::size_t>((i >= 3 ? diffs[i - 3].size() : b0) * n, 1));
      std::size_t stride = std::max<std::size_t>(1, d.size() / 64);
      for (std::size_t c = 0; c < d.size(); c += stride)
        if (!detail::apply_over_ring(A, diffs[i - 2], d[c], acc).empty()) throw CacheCorrupt("d^2 != 0");
    }
    return Resolution<F>::from_differentials(M, std::move(diffs), term == 1);
  }

  void store(const std::filesystem::path& path, const std::string& k, const Resolution<F>& res) const {
    const auto& A = *res.ring();
    std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      out << "cangrow-resolution 1\nkey " << k << "\nfield " << A.field_spec().name() << "\nring-dim " << A.dim() << "\nb0 "
          << res.betti_at(0) << "\nterminated " << (res.terminated() ? 1 : 0) << "\ndifferentials " << res.num_differentials()
          << "\n";
      for (std::size_t i = 1; i <= res.num_differentials(); ++i) {
        const auto& d = res.differential(i);
        out << "d " << i << " " << res.betti_at(i - 1) << " " << d.size() << "\n";
        for (const auto& col : d) {
          out << col.size();
          for (std::size_t e = 0; e < col.size(); ++e) out << " " << col.index[e] << " " << A.field().to_string(col.value[e]);
          out << "\n";
        }
      }
      out << "end\n";
      if (!out) {
        warn_ << "warning: could not write cache entry " << path.string() << "\n";
        return;
      }
    }
    std::filesystem::rename(tmp, path);
  }

 private:
  std::string dir_;
  std::ostream& warn_;
};

// ---- commands ----

template <Field F>
class Session {
 public:
  using Mod = PresentedModule<F>;

  Session(const F& field, const Inputs& in, std::ostream& warn, json& record)
      : field_(field), in_(in), cache_(in.cache_dir, warn), rec_(record) {}

  void run() {
    const std::string& c = in_.command;
    if (c == "tensor") return tensor();
    if (c == "scan") return scan();
    spec_ = parse_ring_spec(in_.ring_text);
    R_ = build_algebra(field_, spec_);
    rec_["ring"] = ring_json(*R_);
    if (c == "resolve" || c == "growth" || c == "canonical") return resolve_like();
    if (c == "tor" || c == "ext") return tor_ext();
    if (c == "gdev") return gdev();
    if (c == "gorenstein") return gorenstein();
    if (c == "criteria") return criteria();
    throw InvalidArgument("unknown command '" + c + "'");
  }

 private:
  Mod module(const std::string& text) {
    auto spec = parse_module_spec(text, spec_.vars);
    return build_module(R_, spec);
  }

  Resolution<F> resolve(const Mod& M, const std::string& spec, std::size_t steps) {
    return cache_.resolve(M, spec, steps, in_.budget);
  }

  void set_betti(const Resolution<F>& res, std::size_t steps) {
    std::vector<std::size_t> b;
    for (std::size_t i = 0; i <= steps; ++i) {
      if (i > res.length() && !res.terminated()) break;
      b.push_back(res.betti_at(i));
    }
    // A terminated resolution is reported up to its last nonzero term.
    if (res.terminated()) b.resize(std::min(b.size(), res.length() + 1));
    rec_["betti"] = b;
  }

  static std::vector<std::size_t> betti_to(const Resolution<F>& res, std::size_t steps) {
    std::vector<std::size_t> b;
    for (std::size_t i = 0; i <= steps; ++i) b.push_back(res.betti_at(i));
    return b;
  }

  GrowthReport growth_of(const Resolution<F>& res, std::size_t steps) {
    std::vector<std::size_t> b;
    for (std::size_t i = 0; i <= std::min(steps, res.length()); ++i) b.push_back(res.betti_at(i));
    return analyze_growth(to_series(b), res.terminated());
  }

  void resolve_like() {
    auto M = module(in_.command == "canonical" ? "canonical" : in_.module);
    std::string mspec = in_.command == "canonical" ? "canonical" : in_.module;
    rec_["module"] = module_json(M, mspec);
    auto res = resolve(M, mspec, in_.steps);
    set_betti(res, in_.steps);
    rec_["growth"] = growth_json(growth_of(res, in_.steps));
    json& r = rec_["result"];
    r["terminated"] = res.terminated();
    r["linear_to_step"] = linear_to_step(res);
    if (in_.command == "canonical") {
      r["type"] = M.num_generators();
      r["b1"] = M.num_relations();
      r["length"] = M.length();
      r["free"] = M.is_free();
      r["length_equals_dim"] = M.length() == R_->dim();
      r["type_equals_socle_dim"] = M.num_generators() == R_->socle().size();
    }
    if (in_.verify) {
      auto chk = verify_resolution(res);
      r["verification"] = {{"composes_to_zero", chk.composes_to_zero},
                           {"exact", chk.exact},
                           {"entries_in_m", chk.entries_in_m},
                           {"ok", chk.ok()}};
    }
    if (in_.differentials) {
      json ds = json::array();
      for (std::size_t i = 1; i <= std::min(in_.steps, res.num_differentials()); ++i)
        ds.push_back(differential_json(*R_, res.differential(i), res.betti_at(i - 1), i));
      r["differentials"] = ds;
    }
  }

  void tor_ext() {
    std::string nspec = in_.module2.empty() ? "k" : in_.module2;
    auto M = module(in_.module);
    auto N = module(nspec);
    rec_["module"] = module_json(M, in_.module);
    Resolution<F> res = resolve(M, in_.module, in_.steps + 1);
    set_betti(res, in_.steps);
    auto dims = in_.command == "tor" ? tor_dims(res, N, in_.steps, in_.budget) : ext_dims(res, N, in_.steps, in_.budget);
    json& r = rec_["result"];
    r["second_module"] = module_json(N, nspec);
    r[in_.command] = dims;
  }

  void gdev() {
    if (in_.steps < 4) throw InvalidArgument("gdev needs --steps >= 4");
    auto W = Mod::canonical(R_);
    auto K = Mod::residue_field(R_);
    rec_["module"] = module_json(W, "canonical");
    auto rw = resolve(W, "canonical", in_.steps);
    auto rk = resolve(K, "k", in_.steps);
    set_betti(rw, in_.steps);
    auto gw = growth_of(rw, in_.steps), gk = growth_of(rk, in_.steps);
    rec_["growth"] = growth_json(gw);
    json& r = rec_["result"];
    r["k_betti"] = betti_to(rk, std::min(in_.steps, rk.terminated() ? rk.length() : in_.steps));
    r["k_growth"] = growth_json(gk);
    if (K.is_free()) throw InvalidArgument("the ring is a field: g(R) is undefined");
    auto dev = deviation_quotient(gw, W.is_free(), gk);
    r["g_exact_zero"] = dev.exact_zero;
    r["g_low"] = rational_json(dev.low);
    r["g_high"] = rational_json(dev.high);
    r["g_low_decimal"] = dev.low.get_d();
    r["g_high_decimal"] = dev.high.get_d();
  }

  void gorenstein() {
    auto W = Mod::canonical(R_);
    rec_["module"] = module_json(W, "canonical");
    json& r = rec_["result"];
    bool by_socle = R_->is_gorenstein();
    bool by_omega = W.is_free() && W.num_generators() == 1;
    r["socle_dim"] = R_->socle().size();
    r["gorenstein"] = by_socle;
    r["omega_free"] = by_omega;
    r["consistent"] = by_socle == by_omega;
    rec_["criteria"].push_back({{"name", "socle-vs-canonical"}, {"consistent", by_socle == by_omega}});
    if (by_socle != by_omega) rec_["findings"].push_back({{"kind", "gorenstein-inconsistency"}, {"ring", R_->spec_text()}});
  }

  void add_criterion(json entry, bool consistent) {
    entry["consistent"] = consistent;
    if (!consistent) rec_["findings"].push_back({{"kind", "theorem-violation"}, {"check", entry}});
    rec_["criteria"].push_back(std::move(entry));
  }

  void criteria() {
    std::string nspec = in_.module2.empty() ? "canonical" : in_.module2;
    auto M = module(in_.module);
    auto N = module(nspec);
    rec_["module"] = module_json(M, in_.module);
    auto res = resolve(M, in_.module, in_.steps);
    set_betti(res, in_.steps);
    auto gm = growth_of(res, in_.steps);
    rec_["growth"] = growth_json(gm);
    bool gor = R_->is_gorenstein();
    rec_["result"]["second_module"] = module_json(N, nspec);
    rec_["result"]["gorenstein"] = gor;

    for (auto kind : {HypothesisKind::tor, HypothesisKind::ext})
      for (std::size_t n = 1; n <= std::min<std::size_t>(in_.steps, 6); ++n) {
        auto c = betti_bound_check(M, N, n, kind, in_.budget);
        json e = {{"name", "betti-bound"},
                  {"kind", to_string(kind)},
                  {"n", n},
                  {"hypothesis", c.hypothesis_holds},
                  {"hypothesis_dim", c.hypothesis_dim},
                  {"ratio", c.ratio.get_str()},
                  {"b_n", c.b_n},
                  {"b_prev", c.b_prev},
                  {"satisfied", c.satisfied},
                  {"equality", c.equality},
                  {"m_kills_tensor", c.m_kills_tensor},
                  {"m_kills_mM", c.m_kills_mM},
                  {"degenerate", c.degenerate}};
        bool ok = !c.hypothesis_holds || (c.satisfied && (c.degenerate || c.equality == (c.m_kills_tensor && c.m_kills_mM)));
        add_criterion(std::move(e), ok);
      }

    for (auto v : {CriterionVariant::manygens, CriterionVariant::genGor, CriterionVariant::classD}) {
      auto g = gorenstein_criterion(M, v, in_.steps, in_.budget);
      json e = {{"name", "gorenstein-criterion"},
                {"variant", to_string(v)},
                {"applies", g.applies},
                {"strict", g.strict},
                {"inequality", g.inequality_holds},
                {"ring_hypothesis", g.ring_hypothesis},
                {"ring_hypothesis_note", g.ring_hypothesis_note},
                {"ext_window", g.ext_window},
                {"ext_vanish_to", g.ext_vanish_to},
                {"conclusion", g.conclusion ? json(*g.conclusion) : json(nullptr)}};
      add_criterion(std::move(e), !g.applies || gor);
    }

    auto t = tachikawa_check(R_, in_.budget);
    add_criterion({{"name", "tachikawa"},
                   {"hypothesis", t.hypothesis},
                   {"socle_dim", t.socle_dim},
                   {"length", t.length},
                   {"window", t.window},
                   {"ext_vanish_to", t.ext_vanish_to},
                   {"concludes_gorenstein", t.concludes_gorenstein}},
                  !t.concludes_gorenstein || gor);

    if (R_->max_ideal_power(3).empty() && !M.is_free()) {
      auto p = lescot_classify(M, in_.steps, in_.budget);
      bool ok = true;
      if (p.kind == LescotCase::exponential_strictly_increasing)
        ok = gm.classification == GrowthClass::exponential_like && gm.strictly_increasing.has_value();
      add_criterion({{"name", "radical-cube-zero-trichotomy"},
                     {"case", to_string(p.kind)},
                     {"e", p.e},
                     {"s", p.s},
                     {"socle_eq_m2", p.socle_eq_m2},
                     {"e_b0_eq_length", p.e_b0_eq_length},
                     {"used_syzygy", p.used_syzygy},
                     {"note", p.note},
                     {"module_classification", to_string(gm.classification)}},
                    ok);
    }

    bool monomial = true;
    std::vector<Monomial> mons;
    for (const auto& g : R_->ideal_generators()) {
      monomial = monomial && g.is_monomial();
      if (g.is_monomial()) mons.push_back(g.leading().mono);
    }
    if (monomial) {
      auto w = monomial_growth_hypothesis(mons, R_->nvars());
      json e = {{"name", "monomial-growth"}};
      if (w) {
        const auto& v = R_->variables();
        e["witness"] = {v[w->i], v[w->j], v[w->l]};
        auto W = Mod::canonical(R_);
        auto rw = resolve(W, "canonical", in_.steps);
        auto gw = growth_of(rw, in_.steps);
        e["omega_classification"] = to_string(gw.classification);
        add_criterion(std::move(e), gw.classification == GrowthClass::exponential_like);
      } else {
        e["witness"] = nullptr;
        add_criterion(std::move(e), true);
      }
    }

    std::size_t depth = std::min<std::size_t>(in_.steps, 4);
    auto cert = gdim_zero_certificate(M, std::max<std::size_t>(depth, 1), in_.budget);
    json e = {{"name", "gdim-zero-certificate"},
              {"reflexive", cert.reflexive},
              {"ext_M_vanish_to", cert.ext_M_vanish_to},
              {"ext_Mstar_vanish_to", cert.ext_Mstar_vanish_to},
              {"depth", cert.depth},
              {"passes", cert.passes()}};
    // For M = omega the certificate passes exactly when R is Gorenstein.
    add_criterion(std::move(e), in_.module != "canonical" || cert.passes() == gor);
  }

  void tensor() {
    if (in_.ring2_text.empty()) throw InvalidArgument("tensor needs --ring2");
    auto s1 = parse_ring_spec(in_.ring_text);
    auto s2 = parse_ring_spec(in_.ring2_text);
    if (in_.field.empty() && !(s1.field == s2.field)) throw InvalidArgument("the two rings are over different fields");
    auto R1 = build_algebra(field_, s1), R2 = build_algebra(field_, s2);
    R_ = ArtinAlgebra<F>::local_tensor(*R1, *R2);
    rec_["ring"] = ring_json(*R_);
    std::size_t s = in_.steps;

    auto hilbert = [](const ArtinAlgebra<F>& A) {
      TruncatedSeries h;
      for (auto c : A.profile().hilbert) h.push_back(mpz_class(static_cast<unsigned long>(c)));
      return h;
    };
    auto h1 = hilbert(*R1), h2 = hilbert(*R2), hT = hilbert(*R_);
    std::size_t len = h1.size() + h2.size() - 1;
    h1.resize(len, 0);
    h2.resize(len, 0);
    auto conv = series_product(h1, h2);
    hT.resize(len, 0);
    add_product_check("hilbert-convolution", conv, hT);

    auto W = Mod::canonical(R_);
    rec_["module"] = module_json(W, "canonical");
    auto rW = resolve(W, "canonical", s);
    auto rW1 = resolve(Mod::canonical(R1), "canonical", s), rW2 = resolve(Mod::canonical(R2), "canonical", s);
    auto rK = resolve(Mod::residue_field(R_), "k", s);
    auto rK1 = resolve(Mod::residue_field(R1), "k", s), rK2 = resolve(Mod::residue_field(R2), "k", s);
    set_betti(rW, s);
    auto gW = growth_of(rW, s);
    rec_["growth"] = growth_json(gW);
    add_product_check("product-series canonical", series_product(to_series(betti_to(rW1, s)), to_series(betti_to(rW2, s))),
                      to_series(betti_to(rW, s)));
    add_product_check("product-series k", series_product(to_series(betti_to(rK1, s)), to_series(betti_to(rK2, s))),
                      to_series(betti_to(rK, s)));

    auto curvature_max = [&](const char* name, const Resolution<F>& t, const Resolution<F>& a, const Resolution<F>& b) {
      auto gt = growth_of(t, s), ga = growth_of(a, s), gb = growth_of(b, s);
      mpq_class lo = std::max(ga.curvature_low, gb.curvature_low), hi = std::max(ga.curvature_high, gb.curvature_high);
      bool overlap = gt.curvature_low <= hi && lo <= gt.curvature_high;
      add_criterion({{"name", name},
                     {"tensor_low", gt.curvature_low.get_str()},
                     {"tensor_high", gt.curvature_high.get_str()},
                     {"max_factor_low", lo.get_str()},
                     {"max_factor_high", hi.get_str()},
                     {"contains_max", overlap}},
                    overlap);
    };
    curvature_max("curvature-max canonical", rW, rW1, rW2);
    curvature_max("curvature-max k", rK, rK1, rK2);

    json& r = rec_["result"];
    r["tensor_spec"] = R_->spec_text();
    r["factors"] = {ring_json(*R1), ring_json(*R2)};
    r["k_betti"] = betti_to(rK, s);
  }

  void add_product_check(const char* name, const TruncatedSeries& expected, const TruncatedSeries& got) {
    json e = json::array(), g = json::array();
    for (const auto& c : expected) e.push_back(c.get_str());
    for (const auto& c : got) g.push_back(c.get_str());
    add_criterion({{"name", name}, {"expected", e}, {"computed", g}}, expected == got);
  }

  static std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t i) { return seed * 1000003ull + i; }

  void scan() {
    json& r = rec_["result"];
    r["kind"] = in_.scan;
    if (in_.scan == "b1b0") {
      std::size_t samples = in_.samples ? in_.samples : 500;
      std::size_t gor = 0, larger = 0, max_dim = 0;
      std::optional<long> min_gap;
      for (std::size_t i = 0; i < samples; ++i) {
        auto s = scan_one(field_, sample_seed(in_.seed, i));
        max_dim = std::max(max_dim, s.dim);
        if (s.gorenstein) {
          ++gor;
          continue;
        }
        long gap = static_cast<long>(s.b1) - static_cast<long>(s.b0);
        min_gap = min_gap ? std::min(*min_gap, gap) : gap;
        if (s.b1 > s.b0) ++larger;
        if (s.finding)
          rec_["findings"].push_back({{"kind", "b1-not-greater-than-b0"},
                                      {"seed", s.seed},
                                      {"ring", s.ring_spec},
                                      {"dim", s.dim},
                                      {"b0", s.b0},
                                      {"b1", s.b1},
                                      {"replay", "cangrow canonical --ring '" + s.ring_spec + "'"}});
      }
      r["samples"] = samples;
      r["gorenstein"] = gor;
      r["non_gorenstein"] = samples - gor;
      r["b1_greater_than_b0"] = larger;
      r["min_gap"] = min_gap ? json(*min_gap) : json(nullptr);
      r["max_dim"] = max_dim;
    } else if (in_.scan == "growth") {
      std::size_t wanted = in_.samples ? in_.samples : 25, found = 0, attempts = 0, exponential = 0;
      while (found < wanted) {
        if (attempts >= 100 * wanted) throw InvalidArgument("could not sample enough rings with a witness");
        std::uint64_t sd = sample_seed(in_.seed, attempts++);
        std::mt19937_64 rng(sd);
        auto s = sample_monomial_quotient(rng);
        auto w = monomial_growth_hypothesis(s.generators, s.nvars);
        if (!w) continue;
        ++found;
        auto R = monomial_quotient(field_, default_variable_names(s.nvars), s.generators);
        auto W = Mod::canonical(R);
        Resolution<F> res(W);
        res.extend(in_.steps, in_.budget);
        std::vector<std::size_t> b = res.betti();
        auto g = analyze_growth(to_series(b), res.terminated());
        if (g.classification == GrowthClass::exponential_like) {
          ++exponential;
        } else {
          rec_["findings"].push_back({{"kind", "witness-without-exponential-growth"},
                                      {"seed", sd},
                                      {"ring", R->spec_text()},
                                      {"betti", b},
                                      {"classification", to_string(g.classification)},
                                      {"curvature_low", g.curvature_low.get_str()},
                                      {"replay", "cangrow growth --ring '" + R->spec_text() + "' --module canonical --steps " +
                                                     std::to_string(in_.steps)}});
        }
      }
      r["samples"] = found;
      r["attempts"] = attempts;
      r["exponential_like"] = exponential;
    } else if (in_.scan == "lemma") {
      std::size_t samples = in_.samples ? in_.samples : 200;
      std::size_t verified = 0, equality = 0, degenerate = 0, satisfied = 0, checks = 0;
      for (std::size_t i = 0; i < samples; ++i) {
        auto p = soundness_probe(field_, sample_seed(in_.seed, i), 3, in_.budget);
        checks += p.bound_checks;
        verified += p.hypothesis_verified;
        equality += p.equality_cases;
        degenerate += p.degenerate_cases;
        satisfied += p.criterion_satisfied;
        for (const auto& v : p.violations)
          rec_["findings"].push_back({{"kind", "theorem-violation"},
                                      {"seed", p.seed},
                                      {"ring", p.ring_spec},
                                      {"M", p.module_M},
                                      {"N", p.module_N},
                                      {"violation", v}});
      }
      r["samples"] = samples;
      r["bound_checks"] = checks;
      r["hypothesis_verified"] = verified;
      r["equality_cases"] = equality;
      r["degenerate_cases"] = degenerate;
      r["criterion_satisfied"] = satisfied;
    } else {
      throw InvalidArgument("--scan expects b1b0, growth or lemma");
    }
  }

  F field_;
  const Inputs& in_;
  ResolutionCache<F> cache_;
  json& rec_;
  RingSpec spec_;
  AlgebraPtr<F> R_;
};

inline json empty_record(const Inputs& in) {
  json rec;
  rec["tool_version"] = kToolVersion;
  rec["command"] = in.command;
  rec["argv"] = json::array();
  rec["inputs"] = in.to_json();
  rec["inputs_hash"] = sha256_hex(rec["inputs"].dump());
  rec["seed"] = in.seed;
  rec["ring"] = nullptr;
  rec["module"] = nullptr;
  rec["betti"] = nullptr;
  rec["growth"] = nullptr;
  rec["criteria"] = json::array();
  rec["findings"] = json::array();
  rec["result"] = json::object();
  rec["timing"] = nullptr;
  return rec;
}

/// Runs a command to completion and returns its record (timing unset).
inline json execute(const Inputs& in, std::ostream& warn) {
  json rec = empty_record(in);
  FieldSpec fs;
  if (!in.field.empty()) {
    fs = parse_field_override(in.field);
  } else if (in.command == "scan") {
    fs = FieldSpec{};
  } else {
    fs = parse_ring_spec(in.ring_text).field;
  }
  // build_algebra instantiates the ring over `fs`; the spec's own field line
  // only matters without an override.
  if (fs.is_rational()) {
    Session<RationalField> s(RationalField(), in, warn, rec);
    s.run();
  } else {
    Session<PrimeField> s(PrimeField(fs.p), in, warn, rec);
    s.run();
  }
  return rec;
}

inline json without_timing(json rec) {
  rec.erase("timing");
  return rec;
}

inline void render_table(const json& rec, std::ostream& out) {
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto list = [&](const json& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + scalar(x);
    return s;
  };
  out << "cangrow " << scalar(rec["tool_version"]) << "  " << scalar(rec["command"]) << "\n";
  if (!rec["ring"].is_null()) {
    const auto& r = rec["ring"];
    out << "ring      " << scalar(r["spec"]) << "\n          dim " << r["dim"] << ", hilbert " << list(r["hilbert"])
        << ", e " << r["embedding_dim"] << ", socle " << r["socle_dim"]
        << (r["gorenstein"].get<bool>() ? ", Gorenstein" : ", not Gorenstein") << "\n";
  }
  if (!rec["module"].is_null()) {
    const auto& m = rec["module"];
    out << "module    " << scalar(m["spec"]) << "  (mu " << m["mu"] << ", relations " << m["relations"] << ", length "
        << m["length"] << ")\n";
  }
  if (!rec["betti"].is_null()) out << "betti     " << list(rec["betti"]) << "\n";
  if (!rec["growth"].is_null()) {
    const auto& g = rec["growth"];
    out << "growth    " << scalar(g["classification"]) << ", curvature in [" << g["curvature_low_decimal"] << ", "
        << g["curvature_high_decimal"] << "]";
    if (!g["curvature_exact"].is_null()) out << " (exactly " << scalar(g["curvature_exact"]) << ")";
    out << "\n";
    if (!g["recurrence"].is_null())
      out << "          recurrence [" << list(g["recurrence"]["coefficients"]) << "] from n = " << g["recurrence"]["from"]
          << "\n";
    if (!g["strictly_increasing_from"].is_null())
      out << "          strictly increasing from i = " << g["strictly_increasing_from"] << "\n";
  }
  if (!rec["criteria"].empty()) {
    out << "criteria\n";
    for (const auto& c : rec["criteria"]) {
      out << "  " << (c["consistent"].get<bool>() ? "ok   " : "FAIL ") << scalar(c["name"]);
      for (auto it = c.begin(); it != c.end(); ++it)
        if (it.key() != "name" && it.key() != "consistent") out << " " << it.key() << "=" << scalar(it.value());
      out << "\n";
    }
  }
  if (!rec["result"].empty()) {
    out << "result\n";
    for (auto it = rec["result"].begin(); it != rec["result"].end(); ++it) {
      if (it.key() == "differentials") {
        for (const auto& d : it.value()) {
          out << "  d" << d["step"] << " (" << d["rows"] << " x " << d["cols"] << ")\n";
          std::size_t j = 0;
          for (const auto& col : d["columns"]) {
            out << "    col " << j++ << ":";
            for (const auto& e : col) out << "  [" << e["row"] << "] " << scalar(e["entry"]);
            out << "\n";
          }
        }
        continue;
      }
      out << "  " << it.key() << ": " << (it.value().is_array() && !it.value().empty() && !it.value()[0].is_object()
                                              ? list(it.value())
                                              : scalar(it.value()))
          << "\n";
    }
  }
  out << "findings  " << rec["findings"].size() << "\n";
  for (const auto& f : rec["findings"]) out << "  " << f.dump() << "\n";
  if (!rec["timing"].is_null()) out << "elapsed   " << rec["timing"]["elapsed_ms"] << " ms\n";
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cangrow: canonical modules, resolutions and Betti growth over Artinian local rings"};
  app.name("cangrow");
  app.require_subcommand(1);

  Inputs in;
  std::string ring_arg, ring2_arg, format = "table", record_file;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"resolve", "minimal free resolution and Betti numbers of a module"},
      {"canonical", "canonical module summary and its Betti numbers"},
      {"tor", "dimensions of Tor_i(M, N)"},
      {"ext", "dimensions of Ext^i(M, N)"},
      {"growth", "Betti growth report: recurrence, curvature, classification"},
      {"gdev", "Gorenstein deviation curv(omega)/curv(k)"},
      {"gorenstein", "socle test with the canonical-module cross-check"},
      {"criteria", "Betti-bound lemma and Gorenstein criteria checks"},
      {"tensor", "local tensor of two rings with product-series verification"},
      {"scan", "randomized scans: b1b0, growth or lemma"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    if (std::string(s.name) != "scan") sub->add_option("--ring", ring_arg, "ring spec file (or inline spec)")->required();
    if (std::string(s.name) == "tensor") sub->add_option("--ring2", ring2_arg, "second ring spec file")->required();
    sub->add_option("--module", in.module, "module: canonical | k | cyclic(...) | ideal(...) | coker([[...]])");
    sub->add_option("--module2", in.module2, "second module for tor, ext and criteria");
    sub->add_option("--steps", in.steps, "resolution depth")->check(CLI::Range(0, 64));
    sub->add_option("--field", in.field, "field override: Q, F<p> or p");
    sub->add_option("--seed", in.seed, "random seed");
    sub->add_option("--samples", in.samples, "number of scan samples");
    sub->add_option("--scan", in.scan, "scan kind: b1b0, growth or lemma");
    sub->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--budget", in.budget, "entry-operation cap per elimination step")->check(CLI::PositiveNumber);
    sub->add_option("--cache", in.cache_dir, "resolution cache directory");
    sub->add_flag("--differentials", in.differentials, "include the differentials (resolve)");
    sub->add_flag("--verify", in.verify, "verify d^2 = 0, exactness and minimality (resolve)");
  }
  auto* replay = app.add_subcommand("replay", "re-run a JSON run record and compare");
  replay->add_option("record", record_file, "record file")->required();
  replay->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  auto* chosen = app.get_subcommands().front();
  in.command = chosen->get_name();
  auto t0 = std::chrono::steady_clock::now();
  json rec;
  int code = kOk;
  try {
    if (in.command == "replay") {
      std::ifstream f(record_file);
      if (!f) throw InvalidArgument("cannot read record '" + record_file + "'");
      json original = json::parse(f, nullptr, true);
      if (!original.contains("inputs") || !original.contains("argv")) throw InvalidArgument("not a cangrow run record");
      Inputs rin = Inputs::from_json(original.at("inputs"));
      json again = execute(rin, err);
      again["argv"] = original["argv"];
      json a = without_timing(original), b = without_timing(again);
      json diffs = json::array();
      for (auto it = a.begin(); it != a.end(); ++it)
        if (!b.contains(it.key()) || b[it.key()] != it.value()) diffs.push_back(it.key());
      rec = empty_record(in);
      rec["result"] = {{"replayed_command", rin.command},
                       {"inputs_hash", again["inputs_hash"]},
                       {"identical", diffs.empty()},
                       {"differences", diffs}};
      if (!diffs.empty()) code = kInputError;
    } else {
      if (in.command != "scan") in.ring_text = read_ring_argument(ring_arg);
      if (in.command == "tensor") in.ring2_text = read_ring_argument(ring2_arg);
      rec = execute(in, err);
      if (in.command == "scan" && !rec["findings"].empty()) code = kFinding;
    }
  } catch (const SizeCap& e) {
    err << "error: budget exhausted: " << e.what() << "\n";
    return kBudgetExhausted;
  } catch (const json::exception& e) {
    err << "error: malformed record: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  json argv = json::array();
  for (const auto& a : args) argv.push_back(a);
  rec["argv"] = argv;
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rec["timing"] = {{"elapsed_ms", std::round(ms * 1000.0) / 1000.0}};
  if (format == "json") {
    out << rec.dump(2) << "\n";
  } else {
    render_table(rec, out);
  }
  return code;
}

}  // namespace cangrow::cli
