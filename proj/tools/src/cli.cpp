#include "parifs_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "parifs/errors.hpp"
#include "report.hpp"

namespace parifs::cli {

namespace {

struct Globals {
  Context ctx;
  std::string out;
  std::string format = "csv";
  mpfr_prec_t precision_bits = kDefaultPrecisionCap;
  bool dry_run = false;
};

Json parameters_of(const CLI::App& sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    std::string name = opt->get_single_name();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    params[name] = value;
  }
  return params;
}

Json manifest(const Globals& g, const std::string& command, const Json& params, const std::vector<std::string>& outputs) {
  Json m = Json::object();
  m["tool"] = "parifs";
  m["version"] = PARIFS_VERSION;
  m["command"] = command;
  m["system"] = g.ctx.system;
  m["seed"] = g.ctx.seed;
  m["format"] = g.format;
  m["precision_bits"] = g.precision_bits;
  m["parameters"] = params;
  Json outs = Json::array();
  for (const std::string& o : outputs) outs.push_back(o);
  m["outputs"] = outs;
  return m;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parabolic IFS digit constructions, statistics and verification", "parifs"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(PARIFS_VERSION));

  Globals g;
  app.add_option("--system", g.ctx.system, "builtin name (regular_cf, backward_cf, even_cf) or JSON config path");
  app.add_option("--seed", g.ctx.seed, "random seed");
  app.add_option("--out", g.out, "output directory; also receives manifest.json");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--precision-bits", g.precision_bits, "precision cap for certified comparisons")
      ->check(CLI::Range(64, 1 << 20));
  app.add_flag("--dry-run", g.dry_run, "print the manifest and exit");

  ExpandArgs ex;
  auto* expand = app.add_subcommand("expand", "digits of a rational point");
  expand->add_option("--x", ex.x, "point p/q in (0,1)")->required();
  expand->add_option("--n", ex.n, "number of digits");

  DecodeArgs de;
  auto* decode = app.add_subcommand("decode", "point of a word applied to an anchor");
  decode->add_option("--word", de.word, "digits, e.g. 1,2,2")->required();
  decode->add_option("--anchor", de.anchor, "anchor point in [0,1]");

  auto construction_options = [](CLI::App* sub, ConstructionArgs& c) {
    sub->add_option("--d", c.d, "decay exponent d > 1 (rational)");
    sub->add_option("--p", c.p, "block length; 0 picks the smallest admissible");
    sub->add_option("--alpha", c.alpha, "level alpha >= 0 (rational)");
    sub->add_option("--kmax", c.kmax, "last segment index");
    sub->add_option("--window", c.window, "index window lo..hi for the subsystem");
    sub->add_option("--max-words", c.max_words, "keep at most this many words (0: all)");
  };

  ConstructArgs co;
  auto* construct = app.add_subcommand("construct", "insertion schedule and digit stream");
  construction_options(construct, co.c);
  construct->add_option("--length", co.length, "stream length (0: schedule horizon)");

  VerifyArgs ve;
  auto* verify = app.add_subcommand("verify", "check a step of the construction");
  construction_options(verify, ve.c);
  verify->add_option("--lemma", ve.lemma, "schedule, max_digit, compare or holder")
      ->required()
      ->check(CLI::IsMember({"schedule", "max_digit", "compare", "holder"}));
  verify->add_option("--eps", ve.eps, "epsilon (rational)");
  verify->add_option("--samples", ve.samples, "random block streams for the comparison check");
  verify->add_option("--pairs", ve.pairs, "point pairs for the holder check");
  verify->add_option("--k-to", ve.k_to, "last k for the comparison check (0: kmax)");
  verify->add_option("--k-hi", ve.k_hi, "largest segment where holder pairs diverge (0: min(50, kmax-1))");
  verify->add_option("--c-est", ve.c_est, "distortion constant (rational); estimated when empty");
  verify->add_option("--a2-samples", ve.a2_samples, "random words for the distortion estimate");

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "digit statistics");
  stats->add_option("kind", st.kind, "galambos, logratio, frequency, trace or philipp")
      ->required()
      ->check(CLI::IsMember({"galambos", "logratio", "frequency", "trace", "philipp"}));
  stats->add_option("--n", st.n, "digits per sample");
  stats->add_option("--samples", st.samples, "number of samples");
  stats->add_option("--bits-per-digit", st.bits_per_digit, "sampling bits per digit (0: family default)");
  stats->add_option("--digit", st.digit, "digit counted by frequency");
  stats->add_option("--x", st.x, "expand this rational instead of sampling (trace, philipp)");

  DimArgs di;
  auto* dim = app.add_subcommand("dim", "dimension bracket of a finite alphabet");
  dim->add_option("--restrict", di.restrict_to, "indices, e.g. 1,2")->required();
  dim->add_option("--p", di.p, "alphabet of all words of this length");
  dim->add_option("--depth", di.depth, "depth or comma-separated depths");

  SubsystemArgs su;
  auto* subsystem = app.add_subcommand("subsystem", "disjoint word subsystem W_p");
  subsystem->add_option("--p", su.p, "word length");
  subsystem->add_option("--window", su.window, "index window lo..hi");
  subsystem->add_option("--max-words", su.max_words, "keep at most this many words (0: all)");
  subsystem->add_option("--depth", su.depth, "dimension bracket depths");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate-config", "load and check a system");
  validate->add_option("--config", va.config, "JSON config path (default: --system)");
  validate->add_option("--window", va.window, "index window for the printed branches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const Format format = g.format == "json" ? Format::json : Format::csv;
  g.ctx.policy = PrecisionPolicy{std::min<mpfr_prec_t>(kDefaultPrecisionBits, g.precision_bits), g.precision_bits};
  std::string variant = command == "stats" ? st.kind : command == "verify" ? ve.lemma : "";
  std::string stem = variant.empty() ? command : command + "_" + variant;
  const Json params = parameters_of(*sub);

  try {
    std::vector<std::string> names = output_names(stem, tables_of(command, variant), format);
    if (g.dry_run) {
      out << manifest(g, command, params, names).dump(2) << "\n";
      return 0;
    }
    Report r;
    if (sub == expand) r = cmd_expand(g.ctx, ex);
    if (sub == decode) r = cmd_decode(g.ctx, de);
    if (sub == construct) r = cmd_construct(g.ctx, co);
    if (sub == verify) r = cmd_verify(g.ctx, ve);
    if (sub == stats) r = cmd_stats(g.ctx, st);
    if (sub == dim) r = cmd_dim(g.ctx, di);
    if (sub == subsystem) r = cmd_subsystem(g.ctx, su);
    if (sub == validate) r = cmd_validate(g.ctx, va);

    if (g.out.empty()) {
      print_outputs(out, err, r, format);
    } else {
      std::filesystem::path dir(g.out);
      write_outputs(dir, stem, r, format);
      std::ofstream mf(dir / "manifest.json", std::ios::binary);
      mf << manifest(g, command, params, names).dump(2) << "\n";
      if (!mf) throw InputError("cannot write " + (dir / "manifest.json").string());
      out << r.summary.dump() << "\n";
    }
    if (!r.failure.empty()) {
      err << "verification failed: " << r.failure << "\n";
      return 3;
    }
    return 0;
  } catch (const PrecisionUndecidable& e) {
    err << "precision undecidable: " << e.what() << "\n";
    return 4;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace parifs::cli
