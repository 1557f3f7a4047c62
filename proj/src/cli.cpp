#include "fqval/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "fqval/arith.hpp"
#include "fqval/bounds.hpp"
#include "fqval/certificate.hpp"
#include "fqval/divisor.hpp"
#include "fqval/errors.hpp"
#include "fqval/json_io.hpp"
#include "fqval/scan.hpp"

namespace fqval {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

ordered_json interval_json(const Interval& iv) {
  ordered_json j;
  j["value"] = iv.mid();
  j["lower"] = iv.lower();
  j["upper"] = iv.upper();
  return j;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(path + ": invalid JSON: " + e.what());
  }
}

// N given either as a decimal integer or as a product of prime powers.
FactoredInteger parse_factored(const std::string& text) {
  if (text.find_first_of("^*") != std::string::npos) return FactoredInteger::parse(text);
  return FactoredInteger::factor(parse_natural(text));
}

struct Flags {
  std::string p, x, y, q, c, k, l, B, g, a1, a2, C, file, p_min, p_max, x_min, x_max, mode, out, checkpoint;
  unsigned workers = 1;
  std::uint64_t chunk_size = 1000;
  bool json = false;
};

void need(const std::string& value, const char* flag) {
  if (value.empty()) throw CLI::RequiredError(flag);
}

Natural nat(const std::string& v, const char* flag) {
  need(v, flag);
  return parse_natural(v);
}

unsigned long small(const std::string& v, const char* flag) {
  Natural n = nat(v, flag);
  if (!n.fits_ulong_p()) throw CapExceeded(std::string(flag) + " is too large");
  return n.get_ui();
}

RealValue real(const std::string& v, const char* flag) {
  need(v, flag);
  return RealValue::decimal(v);
}

ordered_json summary_json(const ScanSummary& s) {
  ordered_json j;
  j["pairs_checked"] = s.pairs_checked;
  j["records"] = s.records;
  j["violations"] = s.violations;
  j["wieferich_hits"] = s.wieferich_hits;
  j["chunks_done"] = s.chunks_done;
  j["chunks_total"] = s.chunks_total;
  return j;
}

ScanConfig scan_config(const Flags& f) {
  ScanConfig cfg;
  cfg.p_min = nat(f.p_min, "--p-min");
  cfg.p_max = nat(f.p_max, "--p-max");
  cfg.x_min = f.x_min.empty() ? Natural(2) : parse_natural(f.x_min);
  cfg.x_max = nat(f.x_max, "--x-max");
  cfg.mode = f.mode.empty() ? ScanMode::Thm2 : parse_scan_mode(f.mode);
  cfg.chunk_size = f.chunk_size;
  cfg.output_path = f.out;
  need(cfg.output_path, "--out");
  cfg.checkpoint_path = f.checkpoint;
  cfg.workers = f.workers;
  if (!f.c.empty()) cfg.c_max = small(f.c, "--c");
  return cfg;
}

int report_scan(const Flags& f, const ScanConfig& cfg, const ScanSummary& s, std::ostream& out, std::ostream& err) {
  if (f.json) {
    out << summary_json(s).dump() << '\n';
  } else {
    out << "pairs_checked  " << s.pairs_checked << '\n'
        << "records        " << s.records << '\n'
        << "violations     " << s.violations << '\n'
        << "wieferich_hits " << s.wieferich_hits << '\n'
        << "chunks         " << s.chunks_done << "/" << s.chunks_total << '\n';
  }
  if (s.violations > 0 && cfg.mode != ScanMode::Conjecture) {
    err << "fqval: FINDING: " << s.violations << " violation(s) of a proven bound in " << to_string(cfg.mode)
        << " mode; see " << cfg.output_path << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fermat-quotient valuation toolkit", "fqval"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  Flags f;
  std::function<int()> action;

  auto sub = [&](const char* name, const char* desc, std::function<int()> run) {
    auto* s = app.add_subcommand(name, desc);
    s->add_flag("--json", f.json, "machine-readable JSON output");
    s->callback([&action, run] { action = run; });
    return s;
  };
  auto opt = [](CLI::App* s, const char* name, std::string& into, const char* desc) { s->add_option(name, into, desc); };

  // valuation
  auto* s = sub("valuation", "v_p(x^(p-1) - 1)", [&] {
    auto r = fermat_quotient_valuation(nat(f.x, "--x"), nat(f.p, "--p"));
    if (f.json) {
      out << ordered_json{{"p", f.p}, {"x", f.x}, {"valuation", r.exponent}, {"witness", to_decimal(r.witness)}}.dump()
          << '\n';
    } else {
      out << r.exponent << '\n';
    }
    return 0;
  });
  opt(s, "--p", f.p, "prime");
  opt(s, "--x", f.x, "base coprime to p");

  s = sub("order", "multiplicative order of x mod p", [&] {
    auto r = mul_order(nat(f.x, "--x"), nat(f.p, "--p"));
    if (f.json)
      out << ordered_json{{"p", f.p}, {"x", f.x}, {"order", to_decimal(r.order)}}.dump() << '\n';
    else
      out << r.order << '\n';
    return 0;
  });
  opt(s, "--p", f.p, "prime");
  opt(s, "--x", f.x, "unit mod p");

  s = sub("bound", "explicit upper bound for v_p(x^(p-1) - 1)", [&] {
    const Natural p = nat(f.p, "--p"), x = nat(f.x, "--x");
    BoundResult r = f.y.empty() ? thm2_bound_for_base(x, p) : thm2_bound(p, x, parse_natural(f.y));
    if (f.json) {
      out << ordered_json{{"p", to_decimal(r.p)},
                          {"x", to_decimal(r.x)},
                          {"y", to_decimal(r.y)},
                          {"bound", to_decimal(r.bound)},
                          {"formula", to_string(r.formula)}}
                 .dump()
          << '\n';
    } else {
      out << r.bound << '\n';
    }
    return 0;
  });
  opt(s, "--p", f.p, "prime");
  opt(s, "--x", f.x, "base");
  opt(s, "--y", f.y, "auxiliary base coprime to x (default: by specialization)");

  s = sub("conj-bound", "conjectural bound 2 + (log x + 2 log log x + log log p)/log p", [&] {
    const Natural p = nat(f.p, "--p");
    Interval b = f.q.empty() ? conj1_bound(nat(f.x, "--x"), p) : conj1_bound_prime(parse_natural(f.q), p);
    if (f.json) {
      auto j = interval_json(b);
      j["form"] = f.q.empty() ? "general" : "prime";
      out << j.dump() << '\n';
    } else {
      out << fmt(b.mid()) << '\n';
    }
    return 0;
  });
  opt(s, "--p", f.p, "prime >= 3");
  opt(s, "--x", f.x, "base");
  opt(s, "--q", f.q, "prime base (uses the log log q form)");

  s = sub("verify-cert", "check a valuation certificate", [&] {
    need(f.file, "--file");
    CertificateParams params = certificate_from_json(read_json_file(f.file));
    CertificateVerdict v = verify_certificate(params);
    if (f.json) {
      auto j = certificate_to_json(params, v);
      j["alpha_products_count"] = v.alpha_products;
      j["linear_forms_count"] = v.linear_forms;
      out << j.dump() << '\n';
      return 0;
    }
    out << (v.certified ? "Certified" : "NotCertified");
    if (v.certified) out << ": v_p <= " << v.bound;
    out << '\n';
    for (const auto& o : v.outcomes) out << "  " << to_string(o.condition) << ": " << to_string(o.outcome) << "  " << o.detail << '\n';
    if (!v.failing.empty()) {
      out << "failing:";
      for (auto c : v.failing) out << ' ' << to_string(c);
      out << '\n';
    }
    return 0;
  });
  opt(s, "--file", f.file, "certificate JSON");

  s = sub("params", "parameter selection for the Fermat-quotient application", [&] {
    ParamSelection sel = select_parameters(real(f.k, "--k"), real(f.l, "--l"), real(f.B, "--B"), nat(f.g, "--g"),
                                           real(f.a1, "--a1"), real(f.a2, "--a2"));
    std::optional<Truth> kl;
    if (!f.p.empty())
      kl = check_kl_condition(sel.k, sel.l, sel.B, sel.g, sel.a1, sel.a2, parse_natural(f.p));
    const std::pair<const char*, const Natural*> rows[] = {{"L", &sel.L},   {"K", &sel.K},   {"R1", &sel.R1},
                                                           {"S1", &sel.S1}, {"R2", &sel.R2}, {"S2", &sel.S2},
                                                           {"R", &sel.R},   {"S", &sel.S},   {"N", &sel.N}};
    if (f.json) {
      ordered_json j;
      for (auto& [name, v] : rows) j[name] = to_decimal(*v);
      j["log_b"] = interval_json(sel.log_b);
      if (kl) j["kl_condition"] = to_string(*kl);
      out << j.dump() << '\n';
    } else {
      for (auto& [name, v] : rows) out << name << "\t" << *v << '\n';
      out << "log b\t" << fmt(sel.log_b.mid()) << '\n';
      if (kl) out << "kl condition\t" << to_string(*kl) << '\n';
    }
    return 0;
  });
  for (auto [name, into] : {std::pair{"--k", &f.k}, {"--l", &f.l}, {"--B", &f.B}, {"--g", &f.g}, {"--a1", &f.a1},
                            {"--a2", &f.a2}, {"--p", &f.p}})
    opt(s, name, *into, "");

  s = sub("lemma-check", "weighted-sum lemma bounds for one instance", [&] {
    need(f.file, "--file");
    LemmaBounds b = lemma10_bounds(lemma_from_json(read_json_file(f.file)));
    auto q = [](const mpq_class& v) { return v.get_str(); };
    if (f.json) {
      out << ordered_json{{"M1", q(b.M1)},
                          {"G1", q(b.G1)},
                          {"M2", q(b.M2)},
                          {"G2", q(b.G2)},
                          {"sum_lr", to_decimal(b.sum_lr)},
                          {"sum_ls", to_decimal(b.sum_ls)},
                          {"within", b.within}}
                 .dump()
          << '\n';
    } else {
      out << "sum l r = " << b.sum_lr << "  in [" << q(b.M1 - b.G1) << ", " << q(b.M1 + b.G1) << "]\n"
          << "sum l s = " << b.sum_ls << "  in [" << q(b.M2 - b.G2) << ", " << q(b.M2 + b.G2) << "]\n"
          << (b.within ? "within" : "OUTSIDE") << '\n';
    }
    return 0;
  });
  opt(s, "--file", f.file, "lemma instance JSON");

  s = sub("sigma-bound", "bound for v_p(sigma(q^c))", [&] {
    const Natural p = nat(f.p, "--p"), q = nat(f.q, "--q");
    const unsigned long c = small(f.c, "--c");
    const auto actual = vp(sigma_prime_power(q, c), p).exponent;
    const bool conj = f.mode == "conjecture";
    if (!f.mode.empty() && !conj && f.mode != "thm3") throw DomainError("sigma-bound: --mode is thm3 or conjecture");
    ordered_json j{{"p", f.p}, {"q", f.q}, {"c", f.c}, {"valuation", actual}};
    std::string text;
    if (conj) {
      Interval b = conj_thm3_bound(p, q, c);
      j["bound"] = interval_json(b);
      text = fmt(b.mid());
    } else {
      Natural b = thm3_bound(p, q, c);
      j["bound"] = to_decimal(b);
      text = to_decimal(b);
    }
    if (f.json)
      out << j.dump() << '\n';
    else
      out << "bound " << text << "  valuation " << actual << '\n';
    return 0;
  });
  opt(s, "--p", f.p, "prime");
  opt(s, "--q", f.q, "prime");
  opt(s, "--c", f.c, "exponent >= 1");
  opt(s, "--mode", f.mode, "thm3 (default) or conjecture");

  s = sub("nagell", "Nagell's inequality for one triple or a grid", [&] {
    if (!f.p.empty()) {
      NagellResult r = nagell_check(nat(f.p, "--p"), nat(f.q, "--q"), small(f.c, "--c"));
      if (f.json)
        out << ordered_json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}}.dump() << '\n';
      else
        out << r.lhs << " <= " << r.rhs << "  " << (r.holds ? "holds" : "FAILS") << '\n';
      return r.holds ? 0 : 1;
    }
    auto rows = nagell_scan(to_u64(nat(f.p_min, "--p-min"), "--p-min"), to_u64(nat(f.p_max, "--p-max"), "--p-max"),
                            f.x_min.empty() ? 3 : to_u64(parse_natural(f.x_min), "--x-min"),
                            to_u64(nat(f.x_max, "--x-max"), "--x-max"), small(f.c, "--c"), f.workers);
    std::size_t failures = 0;
    for (const auto& r : rows) failures += !r.result.holds;
    if (!f.out.empty()) {
      std::ofstream csv(f.out, std::ios::binary | std::ios::trunc);
      if (!csv) throw DomainError("cannot open " + f.out);
      write_nagell_csv(csv, rows);
    }
    if (f.json) {
      out << ordered_json{{"triples", rows.size()}, {"violations", failures}}.dump() << '\n';
    } else if (f.out.empty()) {
      write_nagell_csv(out, rows);
    } else {
      out << "triples " << rows.size() << "  violations " << failures << '\n';
    }
    return 0;
  });
  opt(s, "--p", f.p, "single prime p");
  opt(s, "--q", f.q, "single odd prime q");
  opt(s, "--c", f.c, "exponent (single) or maximum exponent (grid)");
  opt(s, "--p-min", f.p_min, "");
  opt(s, "--p-max", f.p_max, "");
  opt(s, "--x-min", f.x_min, "smallest q (grid)");
  opt(s, "--x-max", f.x_max, "largest q (grid)");
  opt(s, "--out", f.out, "CSV output path");
  s->add_option("--workers", f.workers, "");

  s = sub("perfect-check", "exponent and constant checks over the perfect-number table", [&] {
    auto table = load_perfect_table(f.file.empty() ? default_perfect_table_path() : f.file);
    ordered_json arr = ordered_json::array();
    for (const auto& N : table) {
      Abundancy a = abundancy(N);
      if (a.n != 2 || a.d != 1) throw DomainError(N.str() + " is not perfect");
      ExponentCheck ec = primitive_exponent_check(N);
      double cmin = thm4_min_constant(N, a);
      if (f.json) {
        ordered_json viol = ordered_json::array();
        for (const auto& v : ec.violations) viol.push_back(to_decimal(v.prime));
        arr.push_back({{"N", N.str()}, {"exponents_ok", ec.holds}, {"violations", viol}, {"min_C", cmin}});
      } else {
        out << N.str() << "\texponents " << (ec.holds ? "ok" : "VIOLATED") << "\tmin C " << fmt(cmin, 8) << '\n';
      }
    }
    if (f.json) out << arr.dump() << '\n';
    return 0;
  });
  opt(s, "--file", f.file, "perfect-number table (default: shipped table)");

  s = sub("thm4", "perfect and multiperfect size bounds", [&] {
    need(f.x, "--x");
    FactoredInteger N = parse_factored(f.x);
    Abundancy a = abundancy(N);
    const std::string mode = f.mode.empty() ? "eq08" : f.mode;
    ordered_json j{{"N", N.str()}, {"n", to_decimal(a.n)}, {"d", to_decimal(a.d)}};
    if (mode == "eq08") {
      if (f.C.empty()) {
        double c = thm4_min_constant(N, a);
        j["min_C"] = c;
        if (!f.json) out << "min C " << fmt(c, 8) << '\n';
      } else {
        Thm4Result r = thm4_bound_eq08(N, a, RealValue::decimal(f.C));
        j["log_rhs"] = interval_json(r.log_rhs);
        j["rhs"] = r.rhs;
        j["holds"] = r.holds;
        if (!f.json) out << "rhs " << fmt(r.rhs) << "  " << (r.holds ? "holds" : "fails") << '\n';
      }
    } else if (mode == "eq09") {
      Thm4ConjResult r = thm4_bound_eq09(N, a, real(f.C, "--C"));
      j["log_rhs"] = interval_json(r.log_rhs);
      j["holds"] = r.holds;
      j["E"] = interval_json(r.E);
      j["E_chain_bound"] = interval_json(r.E_chain_bound);
      if (!f.json)
        out << "log rhs " << fmt(r.log_rhs.mid()) << "  " << (r.holds ? "holds" : "fails") << "\nE " << fmt(r.E.mid())
            << "  chain bound " << fmt(r.E_chain_bound.mid()) << '\n';
    } else {
      throw DomainError("thm4: --mode is eq08 or eq09");
    }
    if (f.json) out << j.dump() << '\n';
    return 0;
  });
  opt(s, "--x", f.x, "N as a decimal or as a product like '2^4 * 31'");
  opt(s, "--C", f.C, "constant (eq08: omit to report the minimal C)");
  opt(s, "--mode", f.mode, "eq08 (default) or eq09");

  auto scan_flags = [&](CLI::App* s) {
    opt(s, "--p-min", f.p_min, "");
    opt(s, "--p-max", f.p_max, "");
    opt(s, "--x-min", f.x_min, "");
    opt(s, "--x-max", f.x_max, "");
    opt(s, "--mode", f.mode, "thm2 (default), conjecture or nagell");
    opt(s, "--c", f.c, "largest exponent c in nagell mode (default 50)");
    opt(s, "--out", f.out, "JSONL output");
    opt(s, "--checkpoint", f.checkpoint, "checkpoint file");
    s->add_option("--workers", f.workers, "");
    s->add_option("--chunk-size", f.chunk_size, "width of each p sub-range");
  };
  s = sub("scan", "checkpointed sweep over a (p, x) grid", [&] {
    ScanConfig cfg = scan_config(f);
    return report_scan(f, cfg, run_scan(cfg), out, err);
  });
  scan_flags(s);
  s = sub("resume", "continue an interrupted scan", [&] {
    ScanConfig cfg = scan_config(f);
    need(cfg.checkpoint_path, "--checkpoint");
    return report_scan(f, cfg, resume(cfg), out, err);
  });
  scan_flags(s);

  s = sub("export", "scan records (JSONL) to CSV", [&] {
    need(f.file, "--file");
    need(f.out, "--out");
    ExportResult r = export_csv(f.file, f.out);
    if (f.json)
      out << ordered_json{{"rows", r.rows}}.dump() << '\n';
    else
      out << r.rows << " rows\n";
    return 0;
  });
  opt(s, "--file", f.file, "records JSONL");
  opt(s, "--out", f.out, "CSV path");

  s = sub("heuristic-sum", "partial sum of p^(1-e(x,p)) against its product bound", [&] {
    HeuristicSum h = heuristic_partial_sum(to_u64(nat(f.p, "--p"), "--p"), to_u64(nat(f.x, "--x"), "--x"));
    if (f.json) {
      out << ordered_json{{"sum", static_cast<double>(h.sum)},
                          {"bound", static_cast<double>(h.bound)},
                          {"sum_error", static_cast<double>(h.sum_error)},
                          {"bound_error", static_cast<double>(h.bound_error)},
                          {"sum_le_bound", h.sum_le_bound}}
                 .dump()
          << '\n';
    } else {
      out << "sum   " << fmt(static_cast<double>(h.sum)) << "\nbound " << fmt(static_cast<double>(h.bound)) << '\n'
          << (h.sum_le_bound ? "sum <= bound" : "sum > bound") << '\n';
    }
    return 0;
  });
  opt(s, "--p", f.p, "prime cap P");
  opt(s, "--x", f.x, "base cap X");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const CLI::RequiredError& e) {
    err << "fqval: missing required flag " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "fqval: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "fqval: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fqval
