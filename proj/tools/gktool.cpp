// Command-line surface: v-adic gamma evaluation, Gauss sums, identity
// verification sweeps, and digit-shift uniqueness demos.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

#include "gkt/carlitz.hpp"
#include "gkt/uniqueness.hpp"

using namespace gkt;
using nlohmann::ordered_json;

namespace {

struct SessionConfig {
  long q = 2;
  std::string v_text = "theta";
  int ell = 1;
  int N = 40;
  long p = 3;  // morita only
  std::uint64_t seed = 1;
  std::string format = "tsv";
  std::uint64_t point_cap = 1000000;
  int jobs = 1;
};

FqRef make_field(long q) {
  long p = q;
  for (long d = 2; d <= p; ++d) {
    if (p % d == 0) {
      int e = 0;
      while (p % d == 0) {
        p /= d;
        ++e;
      }
      if (p != 1) throw std::invalid_argument("q must be a prime power");
      return Fq::make(d, e);
    }
  }
  throw std::invalid_argument("q must be a prime power");
}

ordered_json report_json(const GktReport& r) {
  ordered_json j;
  j["case"] = r.kind;
  j["q"] = r.q;
  j["v"] = r.v;
  j["d"] = r.d;
  j["ell"] = r.ell;
  j["x"] = r.x;
  j["y"] = r.y;
  j["N"] = r.N;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["diff_valuation"] = r.diff_valuation;
  j["pass"] = r.pass;
  if (r.retried) j["retried"] = true;
  return j;
}

std::string report_tsv(const GktReport& r) {
  return r.kind + "\t" + std::to_string(r.q) + "\t" + r.v + "\t" + std::to_string(r.d) + "\t" +
         std::to_string(r.ell) + "\t" + (r.x.empty() ? "-" : r.x) + "\t" +
         (r.y.empty() ? "-" : r.y) + "\t" + std::to_string(r.N) + "\t" +
         std::to_string(r.diff_valuation) + "\t" + (r.pass ? "pass" : "FAIL");
}

void emit_gamma(const SessionConfig& cfg, const char* kind, const std::string& arg_desc,
                const GammaValue& g) {
  if (cfg.format == "json") {
    ordered_json j;
    j["kind"] = kind;
    j["q"] = cfg.q;
    j["v"] = cfg.v_text;
    j["arg"] = arg_desc;
    j["N"] = cfg.N;
    j["value"] = g.value.to_string();
    ordered_json cert;
    cert["stop_index"] = g.cert.stop_index;
    cert["guard"] = g.cert.guard;
    cert["window"] = g.cert.window;
    cert["min_tail_val"] = g.cert.min_tail_val;
    j["certificate"] = cert;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << kind << "\t" << arg_desc << "\t" << g.value.to_string() << "\tI="
              << g.cert.stop_index << ",g=" << g.cert.guard << ",W=" << g.cert.window
              << ",tail>=" << g.cert.min_tail_val << "\n";
  }
}

// Applies digit-set presets (or a table file) to the components of a space.
ProductSpaceRef apply_digit_sets(const ProductSpaceRef& S, const std::string& spec) {
  if (spec.empty() || spec == "canonical") return S;
  if (spec.rfind("file:", 0) == 0) {
    // one line per component: "<index>: rep,rep,..."
    std::vector<ComponentRef> comps(S->components());
    std::ifstream in(spec.substr(5));
    if (!in) throw std::invalid_argument("cannot open digit set file");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      size_t colon = line.find(':');
      size_t t = size_t(std::stol(line.substr(0, colon)));
      if (t >= comps.size()) throw std::invalid_argument("digit set file: bad component index");
      std::string reps = line.substr(colon + 1);
      std::vector<std::string> toks;
      size_t rp = 0;
      while (true) {
        size_t c = reps.find(',', rp);
        std::string tok = reps.substr(rp, c == std::string::npos ? std::string::npos : c - rp);
        size_t b = tok.find_first_not_of(" \t");
        toks.push_back(b == std::string::npos ? tok : tok.substr(b));
        if (c == std::string::npos) break;
        rp = c + 1;
      }
      if (comps[t]->is_integer()) {
        std::vector<mpz_class> rr;
        for (auto& tok : toks) rr.emplace_back(tok);
        comps[t] = comps[t]->with_digit_set(std::move(rr));
      } else {
        std::vector<Poly> rr;
        for (auto& tok : toks) rr.push_back(Poly::parse(comps[t]->fq(), tok));
        comps[t] = comps[t]->with_digit_set(std::move(rr));
      }
    }
    return ProductSpace::make(std::move(comps));
  }
  std::vector<std::string> modes;
  size_t pos = 0;
  while (true) {
    size_t c = spec.find(',', pos);
    modes.push_back(spec.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  std::vector<ComponentRef> comps(S->components());
  for (size_t t = 0; t < comps.size(); ++t) {
    std::string mode = modes[t < modes.size() ? t : modes.size() - 1];
    if (mode == "canonical") continue;
    if (mode == "balanced") {
      if (!comps[t]->is_integer())
        throw std::invalid_argument("balanced digits need an integer component");
      long pi = comps[t]->residue_count();
      std::vector<mpz_class> reps;
      for (long r = 0; r < pi; ++r) reps.emplace_back(r <= pi / 2 ? r : r - pi);
      comps[t] = comps[t]->with_digit_set(std::move(reps));
    } else if (mode == "plusv") {
      if (comps[t]->is_integer())
        throw std::invalid_argument("plusv digits need a polynomial component");
      std::vector<Poly> reps;
      for (long r = 0; r < comps[t]->residue_count(); ++r) {
        Poly rep = comps[t]->arep(r);
        if (!rep.is_zero()) rep = rep + comps[t]->pi_a();
        reps.push_back(rep);
      }
      comps[t] = comps[t]->with_digit_set(std::move(reps));
    } else {
      throw std::invalid_argument("unknown digit set mode: " + mode);
    }
  }
  return ProductSpace::make(std::move(comps));
}

ProofParams parse_b(const ProductSpaceRef& S, const std::string& btext) {
  ProofParams P = ProofParams::defaults(S);
  if (btext.empty()) return P;
  std::vector<std::string> toks;
  size_t pos = 0;
  while (true) {
    size_t c = btext.find(';', pos);
    toks.push_back(btext.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  if (toks.size() != S->arity()) throw std::invalid_argument("--b needs one digit per component");
  for (size_t t = 0; t < toks.size(); ++t) {
    const ComponentRef& c = S->component(t);
    if (c->is_integer()) {
      mpz_class b(toks[t]);
      P.b_idx[t] = c->zindex(b);
      if (!(c->zrep(P.b_idx[t]) == b))
        throw std::invalid_argument("--b digit not in the digit set");
    } else {
      Poly b = Poly::parse(c->fq(), toks[t]);
      P.b_idx[t] = c->aindex(b);
      if (!(c->arep(P.b_idx[t]) == b))
        throw std::invalid_argument("--b digit not in the digit set");
    }
  }
  P.validate();
  return P;
}

// Run a sweep, optionally in parallel; results are buffered and emitted in
// canonical grid order regardless of scheduling.
template <typename Fn>
std::vector<GktReport> run_sweep(long count, int jobs, Fn&& fn) {
  std::vector<GktReport> out;
  out.resize(size_t(count));
  if (jobs <= 1) {
    for (long i = 0; i < count; ++i) out[size_t(i)] = fn(i);
    return out;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    while (true) {
      long i = next.fetch_add(1);
      if (i >= count) break;
      out[size_t(i)] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

int emit_reports(const SessionConfig& cfg, const std::vector<GktReport>& reports) {
  long passed = 0;
  for (const auto& r : reports) passed += r.pass ? 1 : 0;
  if (cfg.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    ordered_json top;
    top["reports"] = arr;
    top["passed"] = passed;
    top["total"] = long(reports.size());
    std::cout << top.dump(2) << "\n";
  } else {
    std::cout << "case\tq\tv\td\tell\tx\ty\tN\tdiff_valuation\tresult\n";
    for (const auto& r : reports) std::cout << report_tsv(r) << "\n";
    std::cout << "# passed " << passed << "/" << reports.size() << "\n";
  }
  return passed == long(reports.size()) ? 0 : 1;
}

StepFn seeded_coboundary(const ProductSpaceRef& S, const ValuedField& K, int level,
                         std::uint64_t seed) {
  StepFn G0 = StepFn::random(S, level, K, seed, -2, 2);
  int lvl = G0.level() + 1;
  std::vector<KValue> tab;
  for (long key = 0; key < ProdElem::residue_class_count(S, lvl); ++key) {
    ProdElem x = ProdElem::from_residue_key(S, lvl, key);
    tab.push_back(G0.eval(x) / G0.eval(x.phi()));
  }
  return StepFn(S, lvl, K, std::move(tab));
}

void print_trace(const RecoverResult& res) {
  for (size_t k = 0; k < res.trace.size(); ++k)
    std::cout << "n=" << (k + 2) << "\tord(G_n - G_{n+1})="
              << (res.trace[k] ? std::to_string(*res.trace[k]) : "exact") << "\n";
  std::cout << "stop_n=" << res.stop_n << "\tG_level=" << res.G.level() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact v-adic gamma / Carlitz Gauss sum toolkit"};
  app.set_config("--config");
  app.require_subcommand(1);

  SessionConfig cfg;
  std::string arg_text, x_text, y_text, arg2_text;
  unsigned long carlitz_y = 0;
  std::string components_text = "Zp:3";
  std::string digit_set, b_text;
  int levels = 2, nmax = 5;
  long rr = 12;
  bool sweep_all = false;

  auto add_place = [&](CLI::App* c) {
    c->add_option("--q", cfg.q, "field size q (prime power)");
    c->add_option("--v", cfg.v_text, "irreducible v in A = F_q[theta]");
    c->add_option("--N", cfg.N, "target uniformizer-digit precision");
    c->add_option("--format", cfg.format, "tsv | json");
  };

  auto* gamma = app.add_subcommand("gamma", "evaluate gamma functions");
  gamma->require_subcommand(1);
  auto* g_ari = gamma->add_subcommand("ari", "v-adic arithmetic gamma");
  add_place(g_ari);
  g_ari->add_option("--arg", arg_text, "argument y+1 as a rational")->required();
  auto* g_geo = gamma->add_subcommand("geo", "v-adic geometric gamma");
  add_place(g_geo);
  g_geo->add_option("--x", x_text, "x in A_v as num/den over F_q[theta]")->required();
  auto* g_two = gamma->add_subcommand("two", "v-adic two-variable gamma");
  add_place(g_two);
  g_two->add_option("--x", x_text)->required();
  g_two->add_option("--arg2", arg2_text, "second argument y+1 as a rational")->required();
  auto* g_car = gamma->add_subcommand("carlitz", "Carlitz factorial (exact)");
  g_car->add_option("--q", cfg.q);
  g_car->add_option("--y", carlitz_y, "natural argument y; prints Gamma(y+1)")->required();
  auto* g_mor = gamma->add_subcommand("morita", "Morita p-adic gamma");
  g_mor->add_option("--p", cfg.p, "odd prime");
  g_mor->add_option("--x", arg_text, "argument in Z")->required();
  g_mor->add_option("--N", cfg.N);

  auto* gauss = app.add_subcommand("gauss", "Gauss sums and conjugates");
  std::string gauss_case = "ari";
  gauss->add_option("--case", gauss_case, "ari | geo")->required();
  add_place(gauss);
  gauss->add_option("--ell", cfg.ell, "power of v in the conductor");
  gauss->add_option("--x", x_text, "geo case parameter x");

  auto* gkt = app.add_subcommand("gkt", "verify Gross-Koblitz-Thakur identities");
  gkt->require_subcommand(1);
  std::vector<CLI::App*> gkt_cases;
  for (const char* name : {"ari", "geo", "two"}) {
    auto* c = gkt->add_subcommand(name);
    add_place(c);
    c->add_option("--ell", cfg.ell);
    c->add_flag("--all", sweep_all, "sweep every admissible parameter");
    c->add_option("--x", x_text);
    c->add_option("--y", y_text);
    c->add_option("--jobs", cfg.jobs, "worker threads for sweeps");
    gkt_cases.push_back(c);
  }

  auto* unique = app.add_subcommand("unique", "digit-shift uniqueness demos");
  unique->require_subcommand(1);
  auto add_unique_common = [&](CLI::App* c) {
    c->add_option("--components", components_text, "comma list: Zp:<p>[:e] | Av:<q>:<v>[:e]");
    c->add_option("--seed", cfg.seed);
    c->add_option("--digit-set", digit_set, "canonical | balanced | plusv | file:PATH");
    c->add_option("--b", b_text, "digit b per component, ';'-separated");
    c->add_option("--cap", cfg.point_cap, "periodic point enumeration cap");
    c->add_option("--format", cfg.format);
  };
  auto* u_fwd = unique->add_subcommand("forward", "H = Gamma G/G(-phi(-x)) passes the identity");
  add_unique_common(u_fwd);
  u_fwd->add_option("--levels", levels, "level of the random Gamma and G");
  u_fwd->add_option("--n", nmax, "check periods 1..n");
  auto* u_rec = unique->add_subcommand("recover", "rebuild G from a seeded coboundary F");
  add_unique_common(u_rec);
  u_rec->add_option("--levels", levels, "level of the seed G0");
  u_rec->add_option("--r", rr, "target residual valuation");
  auto* u_s3 = unique->add_subcommand("section3", "forward + recover with custom digit sets");
  add_unique_common(u_s3);
  u_s3->add_option("--levels", levels);
  u_s3->add_option("--n", nmax);
  u_s3->add_option("--r", rr);

  CLI11_PARSE(app, argc, argv);

  try {
    if (g_ari->parsed() || g_geo->parsed() || g_two->parsed()) {
      FqRef F = make_field(cfg.q);
      Poly v = Poly::parse(F, cfg.v_text);
      GammaEngine E(F, v);
      if (g_ari->parsed()) {
        emit_gamma(cfg, "ari", arg_text, E.ari_q(mpq_parse(arg_text), cfg.N));
      } else if (g_geo->parsed()) {
        emit_gamma(cfg, "geo", x_text, E.geo_q(RatFunc::parse(F, x_text), cfg.N));
      } else {
        emit_gamma(cfg, "two", x_text + "," + arg2_text,
                   E.two_q(RatFunc::parse(F, x_text), mpq_parse(arg2_text), cfg.N));
      }
      return 0;
    }
    if (g_car->parsed()) {
      std::cout << carlitz_factorial(make_field(cfg.q), carlitz_y).to_coeff_string() << "\n";
      return 0;
    }
    if (g_mor->parsed()) {
      auto zp = Component::integer(cfg.p);
      LocalElem x = LocalElem::from_value(zp, mpz_class(arg_text), cfg.N);
      std::cout << morita_gamma_p(x, cfg.N).to_string() << "\n";
      return 0;
    }

    if (gauss->parsed()) {
      FqRef F = make_field(cfg.q);
      Poly v = Poly::parse(F, cfg.v_text);
      CarlitzContext ctx(F, v, cfg.ell, cfg.N);
      GaussSum g = gauss_case == "ari"
                       ? gauss_ari(ctx)
                       : gauss_geo(ctx, RatFunc::parse(F, x_text.empty() ? "0" : x_text));
      if (cfg.format == "json") {
        ordered_json j;
        j["case"] = g.kind;
        j["q"] = cfg.q;
        j["v"] = cfg.v_text;
        j["ell"] = cfg.ell;
        if (g.kind == "geo") j["x"] = g.x.to_string();
        j["value"] = g.value.to_string();
        ordered_json conj = ordered_json::array();
        for (const auto& c : g.conjugates) conj.push_back(c.to_string());
        j["conjugates"] = conj;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << g.kind << "\t" << g.value.to_string() << "\n";
        for (size_t s = 0; s < g.conjugates.size(); ++s)
          std::cout << "conj[" << s << "]\t" << g.conjugates[s].to_string() << "\n";
      }
      return 0;
    }

    for (size_t which = 0; which < gkt_cases.size(); ++which) {
      if (!gkt_cases[which]->parsed()) continue;
      FqRef F = make_field(cfg.q);
      Poly v = Poly::parse(F, cfg.v_text);
      CarlitzContext ctx(F, v, cfg.ell, cfg.N);
      std::vector<GktReport> reports;
      const std::string kind = which == 0 ? "ari" : which == 1 ? "geo" : "two";
      if (kind == "ari") {
        std::vector<mpq_class> ys =
            sweep_all ? ctx.admissible_y() : std::vector<mpq_class>{mpq_parse(y_text)};
        reports = run_sweep(long(ys.size()), cfg.jobs,
                            [&](long i) { return verify_gkt_ari(ctx, ys[size_t(i)], cfg.N); });
      } else if (kind == "geo") {
        std::vector<RatFunc> xs =
            sweep_all ? ctx.admissible_x() : std::vector<RatFunc>{RatFunc::parse(F, x_text)};
        reports = run_sweep(long(xs.size()), cfg.jobs,
                            [&](long i) { return verify_gkt_geo(ctx, xs[size_t(i)], cfg.N); });
      } else {
        std::vector<std::pair<RatFunc, mpq_class>> grid;
        if (sweep_all) {
          for (const auto& x : ctx.admissible_x())
            for (const auto& y : ctx.admissible_y()) grid.emplace_back(x, y);
        } else {
          grid.emplace_back(RatFunc::parse(F, x_text), mpq_parse(y_text));
        }
        reports = run_sweep(long(grid.size()), cfg.jobs, [&](long i) {
          return verify_gkt_two(ctx, grid[size_t(i)].first, grid[size_t(i)].second, cfg.N);
        });
      }
      return emit_reports(cfg, reports);
    }

    if (u_fwd->parsed() || u_s3->parsed()) {
      const bool section3 = u_s3->parsed();
      ProductSpaceRef S = apply_digit_sets(ProductSpace::parse(components_text), digit_set);
      ValuedField K{S->component(0), 24};
      ProofParams P = parse_b(S, b_text);
      StepFn Gamma = StepFn::random(S, levels, K, cfg.seed, -1, 1);
      StepFn G = StepFn::random(S, levels, K, cfg.seed + 1, -2, 2);
      StepFn H = build_H(Gamma, G);
      bool all = true;
      for (int n = 1; n <= nmax; ++n) {
        auto rep = check_product_identity(H, Gamma, n, section3, cfg.point_cap);
        long ok = 0;
        for (const auto& pc : rep.points) ok += pc.pass ? 1 : 0;
        std::cout << "n=" << n << "\tpoints=" << rep.points.size() << "\tpass=" << ok
                  << (rep.forms_agree ? "" : "\tFORMS-DISAGREE") << "\n";
        all = all && rep.all_pass && rep.forms_agree;
      }
      if (!section3) {
        std::cout << (all ? "forward: all pass\n" : "forward: FAILURES\n");
        return all ? 0 : 1;
      }
      RecoverOptions opt;
      opt.r = rr;
      opt.section3_points = true;
      opt.point_cap = cfg.point_cap;
      RecoverResult res = recover_G(seeded_coboundary(S, K, levels, cfg.seed + 2), P, opt);
      print_trace(res);
      bool ok = !res.residual || *res.residual >= rr;
      std::cout << "residual: " << (res.residual ? std::to_string(*res.residual) : "exact")
                << "\n";
      return (all && ok) ? 0 : 1;
    }
    if (u_rec->parsed()) {
      ProductSpaceRef S = apply_digit_sets(ProductSpace::parse(components_text), digit_set);
      ValuedField K{S->component(0), int(rr) + 16};
      ProofParams P = parse_b(S, b_text);
      RecoverOptions opt;
      opt.r = rr;
      opt.point_cap = cfg.point_cap;
      opt.section3_points = !S->all_canonical();
      RecoverResult res = recover_G(seeded_coboundary(S, K, levels, cfg.seed), P, opt);
      print_trace(res);
      bool ok = !res.residual || *res.residual >= rr;
      std::cout << "residual: " << (res.residual ? std::to_string(*res.residual) : "exact")
                << (ok ? " (>= target)" : " (BELOW target)") << "\n";
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
