#include "commands.hpp"

#include <algorithm>
#include <sstream>

#include "parifs/cf_expansion.hpp"
#include "parifs/digit_stats.hpp"
#include "parifs/errors.hpp"
#include "parifs/insertion.hpp"
#include "parifs/subsystem.hpp"
#include "parifs/systems.hpp"

namespace parifs::cli {

namespace {

Json word_json(const Word& w) {
  Json j = Json::array();
  for (Digit d : w) j.push_back(d);
  return j;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (Digit d : parse_word(text)) out.push_back(static_cast<std::size_t>(d));
  if (out.empty()) throw InputError(std::string(what) + " is empty");
  return out;
}

IndexWindow default_window(const IfsSystem& sys, const std::string& text) {
  if (!text.empty()) return parse_window(text);
  const IndexSet& ix = sys.indices();
  if (ix.is_finite()) return {ix.min(), ix.max()};
  return {ix.min(), ix.min() + 2};
}

Json subsystem_json(const Subsystem& sub) {
  Json j = Json::object();
  j["p"] = sub.p;
  j["size"] = sub.size();
  Json words = Json::array();
  for (const Word& w : sub.words) words.push_back(word_json(w));
  j["words"] = words;
  j["max_derivative"] = rational(sub.max_derivative);
  j["gamma"] = rational(sub.gamma);
  j["gamma_sup"] = interval(gamma_of(sub));
  j["K"] = sub.K ? rational(*sub.K) : Json(nullptr);
  return j;
}

struct Construction {
  IfsSystem sys;
  InsertionSchedule s;
};

Construction construct(const Context& ctx, const ConstructionArgs& a) {
  IfsSystem sys = load_system(ctx.system);
  const Rational d = parse_rational(a.d);
  const Rational alpha = parse_rational(a.alpha);
  std::uint64_t p = a.p;
  if (p == 0) {
    AdmissibleScan scan = smallest_admissible_p(d, 1'000'000, ctx.policy);
    if (!scan.p) throw InputError("no admissible p for d = " + to_string(d) + ": " + scan.reason);
    p = *scan.p;
  }
  Subsystem sub = select_subsystem(sys, p, default_window(sys, a.window), a.max_words);
  InsertionSchedule s = build_schedule(d, p, alpha, a.kmax, sub, ctx.policy);
  return {std::move(sys), std::move(s)};
}

Json construction_summary(const InsertionSchedule& s) {
  Json j = Json::object();
  j["d"] = rational(s.d);
  j["p"] = s.p;
  j["alpha"] = rational(s.alpha);
  j["kmax"] = s.k_max();
  j["horizon"] = s.horizon();
  j["bypass"] = s.bypass;
  j["subsystem"] = subsystem_json(s.sub);
  j["gap_violations"] = s.gap_violations.size();
  return j;
}

Table schedule_table(const InsertionSchedule& s) {
  Table t{"schedule", {"k", "n", "m", "inserted", "clamped", "gap_lower_ok", "gap_upper_ok"}, {}};
  for (std::uint64_t k = 0; k <= s.k_max(); ++k) {
    std::vector<Json> row{k, s.n[k], s.m[k]};
    if (k == 0 || s.bypass) {
      row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr});
    } else {
      GapCheck g = check_gap(s.d, s.p, k, s.n[k]);
      row.insert(row.end(), {s.inserted[k], static_cast<bool>(s.clamped[k]), g.lower_ok, g.upper_ok});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Report verify_schedule(const InsertionSchedule& s) {
  Report r;
  r.tables.push_back(schedule_table(s));
  r.summary = construction_summary(s);
  Json bad = Json::array();
  for (std::uint64_t k : s.gap_violations) bad.push_back(k);
  r.summary["violating_k"] = bad;
  if (!s.gap_violations.empty()) {
    r.failure = std::to_string(s.gap_violations.size()) + " of " + std::to_string(s.n.size() - 1) +
                " positions violate 2 <= n(k) - (k+p)^d <= p (first k = " + std::to_string(s.gap_violations.front()) +
                ")";
  }
  return r;
}

Report verify_max_digit(const Context& ctx, const InsertionSchedule& s) {
  auto blocks = random_blocks(s.sub, s.blocks_in(s.horizon()) + 1, ctx.seed);
  MaxDigitReport m = verify_max_digit_law(s, blocks, 0, s.k_max());
  Report r;
  r.summary = construction_summary(s);
  Table t{"max_digit",
          {"k0", "k_to", "positions_checked", "holds", "fail_n", "fail_observed", "fail_expected", "ratio_min",
           "ratio_max", "last_ratio_lo", "last_ratio_hi"},
          {}};
  t.rows.push_back({m.k0, m.k_to, m.positions_checked, m.holds, m.fail_n ? Json(*m.fail_n) : Json(nullptr),
                    m.fail_n ? Json(m.fail_observed) : Json(nullptr), m.fail_n ? Json(m.fail_expected) : Json(nullptr),
                    real(m.ratio_min), real(m.ratio_max), real(m.last_ratio_lo), real(m.last_ratio_hi)});
  r.tables.push_back(std::move(t));
  r.summary["holds"] = m.holds;
  if (!m.holds) {
    r.failure = "L_n = " + std::to_string(m.fail_observed) + " at n = " + std::to_string(*m.fail_n) + ", expected " +
                std::to_string(m.fail_expected);
  }
  return r;
}

Table compare_table(const CompareReport& c) {
  Table t{"compare", {"k", "tested", "failures", "worst_margin", "log_J", "log_Jbar"}, {}};
  for (const CompareRow& row : c.rows) {
    t.rows.push_back({row.k, row.tested, row.failures, real(row.worst_margin), real(row.log_J), real(row.log_Jbar)});
  }
  return t;
}

Json compare_summary(const CompareReport& c) {
  Json j = Json::object();
  j["eps"] = rational(c.eps);
  j["samples"] = c.samples;
  j["k1"] = c.k1 ? Json(*c.k1) : Json(nullptr);
  std::uint64_t failures = 0;
  for (const CompareRow& row : c.rows) failures += row.failures;
  j["failures"] = failures;
  j["exact_fallbacks"] = c.exact_fallbacks;
  return j;
}

Report verify_compare(const Context& ctx, const VerifyArgs& a, const InsertionSchedule& s) {
  const std::uint64_t k_to = a.k_to ? a.k_to : s.k_max();
  CompareReport c = verify_compare_lemma(s, parse_rational(a.eps), a.samples, k_to, ctx.seed);
  Report r;
  r.summary = construction_summary(s);
  r.summary["compare"] = compare_summary(c);
  r.tables.push_back(compare_table(c));
  return r;  // report-only
}

Report verify_holder_cmd(const Context& ctx, const VerifyArgs& a, const Construction& c) {
  const InsertionSchedule& s = c.s;
  if (s.k_max() < 2) throw InputError("holder check needs kmax >= 2");
  const std::uint64_t k_hi = a.k_hi ? a.k_hi : std::min<std::uint64_t>(50, s.k_max() - 1);
  const Rational eps = parse_rational(a.eps);
  Rational C_est;
  Json a2 = Json::object();
  if (a.c_est.empty()) {
    IndexWindow w{c.sys.indices().min(), s.sub.max_letter + 3};
    A2Estimate est = estimate_A2_constant(c.sys, a.a2_samples, 1, 12, ctx.seed, w);
    C_est = est.C_est;
    a2["witness"] = word_json(est.witness);
    a2["samples"] = est.samples;
  } else {
    C_est = parse_rational(a.c_est);
  }
  a2["C_est"] = rational(C_est);

  CompareReport cmp = verify_compare_lemma(s, eps, a.samples, k_hi, ctx.seed);
  Report r;
  r.summary = construction_summary(s);
  r.summary["A2"] = a2;
  r.summary["compare"] = compare_summary(cmp);
  Table t{"holder", {"k", "m", "separation", "regime", "log_dist", "log_hdist", "lemma_ok", "bound_ok"}, {}};
  if (!cmp.k1) {
    r.tables.push_back(std::move(t));
    r.failure = "no k1 <= " + std::to_string(k_hi) + " from which the comparison lemma holds";
    return r;
  }
  HolderReport h = verify_holder(s, eps, C_est, *cmp.k1, a.pairs, ctx.seed, k_hi);
  for (const HolderPair& pr : h.rows) {
    t.rows.push_back({pr.k, pr.m, pr.separation, pr.regime, real(pr.log_dist), real(pr.log_hdist), pr.lemma_ok,
                      pr.bound_ok});
  }
  r.tables.push_back(std::move(t));
  Json hj = Json::object();
  hj["C_used"] = rational(h.C_used);
  hj["K"] = rational(h.K);
  hj["k1"] = h.k1;
  hj["pairs"] = h.pairs;
  hj["gap"] = {{"checked", h.gap_checked}, {"failures", h.gap_failures}};
  hj["lemma"] = {{"checked", h.lemma_checked}, {"failures", h.lemma_failures}};
  hj["holder"] = {{"checked", h.holder_checked}, {"failures", h.holder_failures}};
  hj["k1_regime"] = h.k1_regime;
  hj["K1"] = h.K1 ? rational(*h.K1) : Json(nullptr);
  hj["holds"] = h.holds();
  r.summary["holder"] = hj;
  if (!h.holds()) {
    r.failure = "holder check failed: gap " + std::to_string(h.gap_failures) + ", lemma " +
                std::to_string(h.lemma_failures) + ", bound " + std::to_string(h.holder_failures);
  }
  return r;
}

Family sampling_family(const IfsSystem& sys) {
  Family f = sys.family_tag();
  if (f != Family::regular_cf && f != Family::backward_cf) {
    throw InputError("random sampling supports regular_cf and backward_cf, not " + sys.name());
  }
  return f;
}

Word stream_digits(const Context& ctx, const IfsSystem& sys, const StatsArgs& a) {
  if (!a.x.empty()) {
    EncodeResult e = encode_digits(sys, parse_rational(a.x), a.n);
    if (e.digits.size() < a.n) {
      throw InputError("expansion of " + a.x + " stops after " + std::to_string(e.digits.size()) + " digits (" +
                       to_string(e.status) + ")");
    }
    return e.digits;
  }
  Family f = sampling_family(sys);
  unsigned bits = a.bits_per_digit ? a.bits_per_digit : default_bits_per_digit(f);
  return sample_expansion(f, a.n, ctx.seed, 0, bits).digits;
}

}  // namespace

Report cmd_expand(const Context& ctx, const ExpandArgs& a) {
  IfsSystem sys = load_system(ctx.system);
  EncodeResult e = encode_digits(sys, parse_rational(a.x), a.n);
  Report r;
  r.tables.push_back({"expand", {"x", "digits", "status", "step", "tail"}, {}});
  r.tables[0].rows.push_back({a.x, to_string(e.digits), to_string(e.status), e.step, rational(e.tail)});
  r.summary = {{"system", sys.name()}, {"n", a.n}, {"length", e.digits.size()}, {"status", to_string(e.status)}};
  return r;
}

Report cmd_decode(const Context& ctx, const DecodeArgs& a) {
  IfsSystem sys = load_system(ctx.system);
  Word w = parse_word(a.word);
  Rational y = decode_point(sys, w, parse_rational(a.anchor));
  Report r;
  r.tables.push_back({"decode", {"word", "anchor", "point", "approx"}, {}});
  r.tables[0].rows.push_back({to_string(w), a.anchor, rational(y), real(to_double(y))});
  r.summary = {{"system", sys.name()}, {"length", w.size()}};
  return r;
}

Report cmd_construct(const Context& ctx, const ConstructArgs& a) {
  Construction c = construct(ctx, a.c);
  const InsertionSchedule& s = c.s;
  const std::uint64_t length = a.length ? a.length : s.horizon();
  auto blocks = random_blocks(s.sub, s.blocks_in(length) + 1, ctx.seed);
  Word x = synthesize(s, blocks, length);

  Report r;
  r.tables.push_back(schedule_table(s));
  Table stream{"stream", {"position", "digit", "inserted"}, {}};
  std::uint64_t k = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::uint64_t pos = i + 1;
    bool ins = !s.bypass && k < s.n.size() && s.n[k] == pos;
    if (ins) ++k;
    stream.rows.push_back({pos, x[i], ins});
  }
  r.tables.push_back(std::move(stream));
  r.summary = construction_summary(s);
  r.summary["length"] = length;
  return r;
}

Report cmd_verify(const Context& ctx, const VerifyArgs& a) {
  static const std::vector<std::string> lemmas{"schedule", "max_digit", "compare", "holder"};
  if (std::find(lemmas.begin(), lemmas.end(), a.lemma) == lemmas.end()) {
    throw InputError("--lemma must be one of schedule, max_digit, compare, holder");
  }
  Construction c = construct(ctx, a.c);
  Report r;
  if (a.lemma == "schedule") r = verify_schedule(c.s);
  if (a.lemma == "max_digit") r = verify_max_digit(ctx, c.s);
  if (a.lemma == "compare") r = verify_compare(ctx, a, c.s);
  if (a.lemma == "holder") r = verify_holder_cmd(ctx, a, c);
  r.summary["lemma"] = a.lemma;
  r.summary["passed"] = r.failure.empty();
  return r;
}

Report cmd_stats(const Context& ctx, const StatsArgs& a) {
  IfsSystem sys = load_system(ctx.system);
  Report r;
  r.summary = {{"kind", a.kind}, {"system", sys.name()}, {"n", a.n}};
  if (a.kind == "galambos") {
    if (sys.family_tag() != Family::regular_cf) throw InputError("galambos statistics need regular_cf");
    GalambosResult g = galambos_experiment(a.n, a.samples, ctx.seed,
                                           a.bits_per_digit ? a.bits_per_digit : kRegularBitsPerDigit);
    Table t{"galambos", {"y", "empirical_cdf", "limit_cdf"}, {}};
    for (const GalambosRow& row : g.rows) t.rows.push_back({real(row.y), real(row.empirical_cdf), real(row.limit_cdf)});
    r.tables.push_back(std::move(t));
    r.summary["samples"] = a.samples;
    r.summary["ks"] = real(g.ks);
  } else if (a.kind == "logratio") {
    if (sys.family_tag() != Family::regular_cf) throw InputError("logratio statistics need regular_cf");
    LogRatioResult l = log_ratio_experiment(a.n, a.samples, ctx.seed,
                                            a.bits_per_digit ? a.bits_per_digit : kRegularBitsPerDigit);
    Table t{"logratio", {"sample", "ratio"}, {}};
    for (std::size_t i = 0; i < l.ratios.size(); ++i) t.rows.push_back({i, real(l.ratios[i])});
    r.tables.push_back(std::move(t));
    r.summary["samples"] = a.samples;
    r.summary["median"] = real(l.median);
  } else if (a.kind == "frequency") {
    FrequencyResult f =
        frequency_experiment(sampling_family(sys), a.digit, a.n, a.samples, ctx.seed, a.bits_per_digit);
    Table t{"frequency", {"sample", "frequency"}, {}};
    for (std::size_t i = 0; i < f.per_sample.size(); ++i) t.rows.push_back({i, real(f.per_sample[i])});
    r.tables.push_back(std::move(t));
    r.summary["digit"] = a.digit;
    r.summary["samples"] = a.samples;
    r.summary["mean"] = real(f.mean);
  } else if (a.kind == "trace") {
    LargestDigitTrace tr = largest_digit_trace(stream_digits(ctx, sys, a), a.n);
    Table t{"trace", {"n", "L_n", "ratio"}, {}};
    for (std::size_t i = 0; i < tr.n.size(); ++i) {
      t.rows.push_back({tr.n[i], tr.L[i], tr.ratio[i] ? real(*tr.ratio[i]) : Json(nullptr)});
    }
    r.tables.push_back(std::move(t));
  } else if (a.kind == "philipp") {
    if (a.n < 3) throw InputError("philipp statistic needs n >= 3");
    std::vector<double> inf = philipp_statistic(stream_digits(ctx, sys, a), a.n);
    Table t{"philipp", {"n", "running_inf"}, {}};
    for (std::size_t i = 0; i < inf.size(); ++i) t.rows.push_back({i + 3, real(inf[i])});
    r.tables.push_back(std::move(t));
    r.summary["final"] = real(inf.back());
  } else {
    throw InputError("stats kind must be galambos, logratio, frequency, trace or philipp");
  }
  return r;
}

Report cmd_dim(const Context& ctx, const DimArgs& a) {
  IfsSystem sys = load_system(ctx.system);
  if (a.p < 1) throw InputError("--p must be at least 1");
  Word letters = parse_word(a.restrict_to);
  if (letters.empty()) throw InputError("--restrict is empty");
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  std::vector<MoebiusBranch> base;
  for (Digit i : letters) base.push_back(sys.branch(i));
  std::vector<MoebiusBranch> maps;
  for_each_word(base, letters, a.p, kDefaultEnumerationCap,
                [&](const Word&, const MoebiusBranch& m) { maps.push_back(m); });

  Report r;
  Table t{"dim", {"depth", "s_lo", "s_hi", "words_enumerated"}, {}};
  Json brackets = Json::array();
  for (std::size_t depth : parse_list(a.depth, "--depth")) {
    DimensionBracket b = dimension_bracket(maps, depth);
    t.rows.push_back({b.depth, real(b.s_lo), real(b.s_hi), b.words_enumerated});
    brackets.push_back({{"depth", b.depth}, {"s_lo", real(b.s_lo)}, {"s_hi", real(b.s_hi)}});
  }
  r.tables.push_back(std::move(t));
  r.summary = {{"system", sys.name()}, {"alphabet", word_json(letters)}, {"p", a.p}, {"brackets", brackets}};
  return r;
}

Report cmd_subsystem(const Context& ctx, const SubsystemArgs& a) {
  IfsSystem sys = load_system(ctx.system);
  Subsystem sub = select_subsystem(sys, a.p, default_window(sys, a.window), a.max_words);
  Report r;
  Table t{"subsystem", {"word", "lo", "hi", "max_derivative"}, {}};
  for (std::size_t i = 0; i < sub.size(); ++i) {
    t.rows.push_back({to_string(sub.words[i]), rational(sub.intervals[i].lo), rational(sub.intervals[i].hi),
                      rational(sub.composed[i].max_derivative())});
  }
  r.tables.push_back(std::move(t));
  r.summary = subsystem_json(sub);
  Json brackets = Json::array();
  for (std::size_t depth : parse_list(a.depth, "--depth")) {
    DimensionBracket b = dimension_bracket(sub, depth);
    brackets.push_back({{"depth", b.depth}, {"s_lo", real(b.s_lo)}, {"s_hi", real(b.s_hi)}});
  }
  r.summary["brackets"] = brackets;
  return r;
}

Report cmd_validate(const Context& ctx, const ValidateArgs& a) {
  IfsSystem sys = a.config.empty() ? load_system(ctx.system) : build_system(read_system_config(a.config));
  IndexWindow w = default_window(sys, a.window);
  OscReport osc = osc_check(sys, w);

  Report r;
  Table t{"branches", {"index", "a", "b", "c", "d", "parabolic"}, {}};
  for (Digit i : sys.window(w)) {
    MoebiusBranch m = sys.branch(i);
    t.rows.push_back({i, m.a().get_str(), m.b().get_str(), m.c().get_str(), m.d().get_str(), sys.is_parabolic(i)});
  }
  r.tables.push_back(std::move(t));

  Json parabolic = Json::array();
  for (const ParabolicPoint& pp : sys.parabolic()) {
    parabolic.push_back({{"index", pp.index}, {"fixed_point", pp.fixed_point.str()}});
  }
  Json warnings = Json::array();
  for (const std::string& s : sys.warnings()) warnings.push_back(s);
  r.summary = {{"name", sys.name()},       {"family", to_string(sys.family_tag())},
               {"indices", sys.indices().describe()}, {"parabolic", parabolic},
               {"warnings", warnings},     {"window", {w.lo, w.hi}}};
  if (sys.decay()) {
    r.summary["decay"] = {{"c", rational(sys.decay()->c)}, {"d", rational(sys.decay()->d)}};
  }
  Json oj = {{"holds", osc.holds}};
  if (!osc.holds) {
    oj["pair"] = {osc.first, osc.second};
    oj["overlap"] = {rational(osc.overlap_lo), rational(osc.overlap_hi)};
    r.failure = "open set condition fails for indices " + std::to_string(osc.first) + " and " +
                std::to_string(osc.second);
  }
  r.summary["osc"] = oj;
  return r;
}

std::vector<std::string> tables_of(const std::string& command, const std::string& variant) {
  if (command == "construct") return {"schedule", "stream"};
  if (command == "verify") {
    if (variant == "max_digit" || variant == "compare" || variant == "holder") return {variant};
    return {"schedule"};
  }
  if (command == "stats") return {variant};
  if (command == "validate-config") return {"branches"};
  return {command};
}

}  // namespace parifs::cli
