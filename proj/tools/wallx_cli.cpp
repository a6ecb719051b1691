// wallx: exact wall-crossing toolkit.  JSON in, JSON out, manifest on every
// run.  Exit codes: 0 pass, 1 a checked property is false, 2 usage or parse
// trouble, 3 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "wallx/stability.hpp"
#include "wallx/vstab.hpp"

using json = nlohmann::ordered_json;
using namespace wallx;

namespace {

struct ParseFail : std::runtime_error {
  explicit ParseFail(const std::string& m) : std::runtime_error(m) {}
};

// ---- plumbing ---------------------------------------------------------------

std::string fnv1a(const std::string& bytes) {
  unsigned long long h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json make_manifest(const std::string& command, const std::string& input_bytes,
                   bool floating, long long seed) {
  json m;
  m["command"] = command;
  m["mode"] = floating ? "float" : "exact";
  m["input_hash"] = "fnv1a:" + fnv1a(input_bytes);
  m["tool"] = {{"name", "wallx"}, {"version", "0.1.0"}, {"format", 1}};
  if (seed != 0) m["seed"] = seed;
  return m;
}

void emit(const std::string& out_path, const json& doc) {
  std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output path " + out_path);
  f << text;
}

Rational parse_rat(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    const std::string& s = v.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw ParseFail("bad rational literal: " + s);
    }
  }
  throw ParseFail("rational must be an integer or a \"p/q\" string");
}

Rational parse_rat_str(const std::string& s) { return parse_rat(json(s)); }

std::vector<Rational> split_rats(const std::string& s, size_t expect) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_rat_str(tok));
  if (expect && out.size() != expect)
    throw ParseFail("expected " + std::to_string(expect) + " comma-separated rationals");
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back((int)std::stoll(tok));
  return out;
}

IntVec parse_ivec(const json& v) {
  if (!v.is_array()) throw ParseFail("expected an integer vector");
  IntVec out;
  for (const auto& x : v) out.push_back(x.get<long long>());
  return out;
}

GaussianRational parse_gauss(const json& v) {
  if (v.is_array() && v.size() == 2) return {parse_rat(v[0]), parse_rat(v[1])};
  if (v.is_object() && v.contains("re") && v.contains("im"))
    return {parse_rat(v["re"]), parse_rat(v["im"])};
  throw ParseFail("charge value must be [re, im] or {\"re\", \"im\"}");
}

CentralCharge parse_charge(const json& v, bool floating) {
  if (!v.is_array() || v.empty()) throw ParseFail("charge must be a nonempty array");
  std::vector<GaussianRational> z;
  for (const auto& e : v) z.push_back(parse_gauss(e));
  CentralCharge c(z);
  c.floating = floating;
  return c;
}

json ivec_json(const IntVec& v) {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

json gauss_json(const GaussianRational& z) { return json::array({z.re.str(), z.im.str()}); }

std::string read_input(const std::string& path, const std::string& inline_json) {
  if (!inline_json.empty()) return inline_json;
  if (path.empty()) throw ParseFail("need --input FILE or --json TEXT");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseFail("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// ---- stability data loading ---------------------------------------------------

struct LoadedTorus {
  StabilityData data;
  TorusCtx ctx;
  std::optional<Sector> sector;
  std::optional<CentralCharge> new_charge;
};

struct LoadedMatrix {
  BasicStabilityData<MultiPoly> data;
  MatrixCtx ctx;
  std::optional<Sector> sector;
  std::optional<CentralCharge> new_charge;
  int nvars = 0;
};

std::optional<Sector> parse_sector(const json& j) {
  if (!j.contains("sector")) return std::nullopt;
  return Sector(parse_rat(j["sector"].at("start")), parse_rat(j["sector"].at("end")));
}

int parse_height(const json& j) {
  int h = j.value("height", 6);
  if (h < 1 || h > 24) throw ParseFail("height out of range");
  return h;
}

std::vector<IntVec> parse_gens(const json& j) {
  std::vector<IntVec> gens;
  for (const auto& g : j.at("gens")) gens.push_back(parse_ivec(g));
  if (gens.empty()) throw ParseFail("need at least one generator");
  return gens;
}

LoadedTorus load_torus(const json& j, bool floating) {
  LoadedTorus out;
  IntMat pairing;
  for (const auto& row : j.at("pairing")) {
    pairing.push_back({});
    for (const auto& x : row) pairing.back().push_back(x.get<long long>());
  }
  int height = parse_height(j);
  auto gens = parse_gens(j);
  out.ctx = TorusCtx::make(pairing, gens, height);
  out.data.charge = parse_charge(j.at("charge"), floating);
  out.data.height = height;
  out.data.gens = gens;
  for (const auto& e : j.value("a", json::array())) {
    IntVec gamma = parse_ivec(e.at("gamma"));
    if (e.contains("dilog"))
      out.data.a[gamma] = dilog_unit(e["dilog"].get<int>());
    else if (e.contains("scalar"))
      out.data.a[gamma] = LaurentFraction(parse_rat(e["scalar"]));
    else
      throw ParseFail("coefficient needs \"dilog\" or \"scalar\"");
  }
  // sugar: a full quantum-dilogarithm tower on each listed primitive class
  for (const auto& g : j.value("dilog_rays", json::array())) {
    IntVec gamma = parse_ivec(g);
    for (int k = 1;; ++k) {
      IntVec kg(gamma.size());
      for (size_t t = 0; t < gamma.size(); ++t) kg[t] = k * gamma[t];
      if (!out.ctx.hgt.count(kg)) break;
      out.data.a[kg] = dilog_unit(k);
    }
  }
  out.sector = parse_sector(j);
  if (j.contains("new_charge")) out.new_charge = parse_charge(j["new_charge"], floating);
  return out;
}

LoadedMatrix load_matrix(const json& j, bool floating) {
  LoadedMatrix out;
  int size = j.at("size").get<int>();
  out.nvars = j.at("nvars").get<int>();
  int height = parse_height(j);
  auto gens = parse_gens(j);
  std::map<IntVec, MatrixCtx::Key> slots;
  for (const auto& s : j.at("slots"))
    slots[parse_ivec(s.at("gamma"))] = {s.at("row").get<int>(), s.at("col").get<int>()};
  out.ctx = MatrixCtx::make(size, out.nvars, slots, gens, height);
  out.data.charge = parse_charge(j.at("charge"), floating);
  out.data.height = height;
  out.data.gens = gens;
  for (const auto& e : j.value("a", json::array())) {
    IntVec gamma = parse_ivec(e.at("gamma"));
    if (e.contains("var"))
      out.data.a[gamma] = MultiPoly::variable(out.nvars, e["var"].get<int>());
    else if (e.contains("scalar"))
      out.data.a[gamma] = MultiPoly(out.nvars, parse_rat(e["scalar"]));
    else
      throw ParseFail("coefficient needs \"var\" or \"scalar\"");
  }
  out.sector = parse_sector(j);
  if (j.contains("new_charge")) out.new_charge = parse_charge(j["new_charge"], floating);
  return out;
}

std::vector<std::string> var_names(int nvars) {
  static const char* base[] = {"x", "y", "z", "w"};
  std::vector<std::string> names;
  for (int i = 0; i < nvars; ++i)
    names.push_back(i < 4 ? base[i] : "x" + std::to_string(i));
  return names;
}

// ---- factorize ------------------------------------------------------------------

template <class Loaded>
json rays_json(const Loaded& L, const Sector& v) {
  auto supp = sector_support(L.data, v, L.ctx);
  auto rays = clockwise_rays(L.data.charge, supp, L.ctx);
  json out = json::array();
  for (const auto& ray : rays) {
    json r;
    r["dir"] = gauss_json(L.data.charge.eval(ray.front()));
    json cls = json::array();
    for (const auto& g : ray) cls.push_back(ivec_json(g));
    r["classes"] = cls;
    out.push_back(r);
  }
  return out;
}

template <class Loaded>
int run_factorize(const Loaded& L, json& doc) {
  if (!L.sector) throw ParseFail("factorize needs a \"sector\"");
  auto support = check_support_norm(L.data);
  json sj;
  sj["pass"] = support.pass;
  if (support.witness) sj["witness"] = ivec_json(*support.witness);
  if (support.c_squared) sj["c_squared"] = support.c_squared->str();
  if (!support.detail.empty()) sj["detail"] = support.detail;
  doc["support"] = sj;
  if (!support.pass) {
    doc["pass"] = false;
    return 1;
  }

  doc["rays"] = rays_json(L, *L.sector);
  auto rep = factor_check(L.data, *L.sector, L.ctx);
  json fj;
  fj["pass"] = rep.pass;
  if (rep.where) {
    if constexpr (std::is_same_v<typename decltype(rep.where)::value_type, IntVec>) {
      fj["first_diff"] = ivec_json(*rep.where);
    } else {
      std::ostringstream os;
      os << "(" << rep.where->first << "," << rep.where->second << ")";
      fj["first_diff"] = os.str();
    }
  }
  doc["factor_check"] = fj;

  if constexpr (std::is_same_v<Loaded, LoadedTorus>) {
    auto sp = extract_spectrum(L.data, *L.sector);
    if (sp.omega) {
      json oj = json::array();
      for (const auto& [gamma, om] : *sp.omega)
        oj.push_back({{"gamma", ivec_json(gamma)}, {"omega", om}});
      doc["omega"] = oj;
    }
  }
  doc["pass"] = rep.pass;
  return rep.pass ? 0 : 1;
}

// ---- wallcross --------------------------------------------------------------------

template <class Loaded, class CoeffPrint>
int run_wallcross(const Loaded& L, json& doc, CoeffPrint print) {
  if (!L.new_charge) throw ParseFail("wallcross needs \"new_charge\"");
  auto d2 = wall_cross(L.data, *L.new_charge, L.ctx);
  json aj = json::array();
  for (const auto& [gamma, c] : d2.a)
    aj.push_back({{"gamma", ivec_json(gamma)}, {"coeff", print(c)}});
  doc["a_new"] = aj;

  // crossing back must restore the input exactly
  auto d3 = wall_cross(d2, L.data.charge, L.ctx);
  bool inv = d3.a == L.data.a;
  doc["involution"] = inv;
  doc["pass"] = inv;
  return inv ? 0 : 1;
}

// ---- a2 commands -------------------------------------------------------------------

json point_json(const A2Point& p) {
  json j;
  j["theta01"] = p.theta01.str();
  j["theta12"] = p.theta12.str();
  j["theta02"] = p.theta02.str();
  j["alpha1"] = p.alpha1().str();
  j["alpha2"] = p.alpha2().str();
  j["alpha3"] = p.alpha3().str();
  return j;
}

json cases_json(const std::set<StabCase>& cs) {
  json a = json::array();
  for (StabCase c : cs) a.push_back(stab_case_name(c));
  return a;
}

json classify_point(const A2Point& p) {
  json j;
  CoamoebaVerdict v = coamoeba_member(p);
  j["member"] = v.member;
  if (v.member) {
    j["translate"] = {2 * v.a, 2 * v.b};
    j["sign"] = v.sign;
  }
  try {
    j["cases"] = cases_json(a2_classify(p));
  } catch (const BoundaryAmbiguity& e) {
    j["boundary"] = true;
    j["detail"] = e.what();
  }
  return j;
}

A2Point point_from_flags(const std::string& theta, const std::string& alphas) {
  if (!theta.empty()) {
    auto t = split_rats(theta, 3);
    return A2Point{t[0], t[1], t[2]};
  }
  if (!alphas.empty()) {
    auto a = split_rats(alphas, 2);
    return a2_from_alphas(a[0], a[1]);
  }
  throw ParseFail("need --theta t01,t12,t02 or --alphas a1,a2");
}

StabCase case_from_name(const std::string& s) {
  if (s == "ALL") return StabCase::All;
  if (s == "I") return StabCase::I;
  if (s == "II") return StabCase::II;
  if (s == "III") return StabCase::III;
  throw ParseFail("unknown case name: " + s);
}

int thread_budget() {
  if (const char* env = std::getenv("WALLX_THREADS")) {
    int t = (int)std::strtol(env, nullptr, 10);
    if (t >= 1) return std::min(t, 64);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? std::min(hc, 8u) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wallx: exact wall-crossing toolkit"};
  app.set_config("--config");
  app.require_subcommand(0, 1);

  std::string input_path, inline_json, out_path;
  bool floating = false;
  long long seed = 0;
  app.add_flag("--float", floating, "floating phase comparisons (stamped in manifest)");
  app.add_option("--seed", seed, "seed for randomized sweeps");

  auto add_io = [&](CLI::App* c, bool needs_input) {
    if (needs_input) {
      c->add_option("--input", input_path, "input JSON file");
      c->add_option("--json", inline_json, "inline input JSON");
    }
    c->add_option("--out", out_path, "output path (default stdout)");
    c->fallthrough();  // --float / --seed may follow the subcommand
  };

  CLI::App* c_fact = app.add_subcommand("factorize", "ray decomposition and factorization check");
  add_io(c_fact, true);

  CLI::App* c_wall = app.add_subcommand("wallcross", "recompute ray data under a new charge");
  add_io(c_wall, true);

  std::string theta_str, alphas_str;
  CLI::App* c_a2 = app.add_subcommand("a2-classify", "stability case set of a phase triple");
  c_a2->add_option("--theta", theta_str, "theta01,theta12,theta02 in pi units");
  c_a2->add_option("--alphas", alphas_str, "alpha1,alpha2 (anchors theta01 = 0)");
  add_io(c_a2, false);

  std::string thetas_str, cutoff_str = "2,2", case_str;
  std::vector<long long> q_list;
  CLI::App* c_wcf = app.add_subcommand("wcf-verify", "interval concatenation identity");
  c_wcf->add_option("--thetas", thetas_str, "t1,t2,t3 interval split")->required();
  c_wcf->add_option("--q", q_list, "prime powers to check (default 2)");
  c_wcf->add_option("--cutoff", cutoff_str, "dimension cutoff (default 2,2)");
  c_wcf->add_option("--theta", theta_str, "slicing point theta01,theta12,theta02");
  c_wcf->add_option("--alphas", alphas_str, "slicing point via alphas");
  c_wcf->add_option("--case", case_str, "semistable assignment: ALL, I, II, or III");
  add_io(c_wcf, false);

  int grid_n = 100;
  CLI::App* c_reg = app.add_subcommand("regions", "case-set sweep over two fundamental translates");
  c_reg->add_option("--grid", grid_n, "grid resolution per axis (default 100)");
  add_io(c_reg, false);

  CLI::App* c_oracle = app.add_subcommand("hall-oracle", "finite-field consistency sweep");
  c_oracle->add_option("--q", q_list, "prime powers to check (default 3)");
  c_oracle->add_option("--cutoff", cutoff_str, "dimension cutoff (default 2,2)");
  int sample = 0;
  c_oracle->add_option("--sample", sample, "sample this many triples (0 = all)");
  add_io(c_oracle, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    try {
      if (*c_fact || *c_wall) {
        std::string bytes = read_input(input_path, inline_json);
        json j = json::parse(bytes);
        bool matrix = j.value("mode", "torus") == std::string("matrix");
        json doc;
        doc["manifest"] =
            make_manifest(c_fact->parsed() ? "factorize" : "wallcross", bytes, floating, seed);
        int rc;
        if (*c_fact) {
          rc = matrix ? run_factorize(load_matrix(j, floating), doc)
                      : run_factorize(load_torus(j, floating), doc);
        } else if (matrix) {
          auto L = load_matrix(j, floating);
          auto names = var_names(L.nvars);
          rc = run_wallcross(L, doc, [&](const MultiPoly& c) { return c.str(names); });
        } else {
          rc = run_wallcross(load_torus(j, floating), doc,
                             [](const LaurentFraction& c) { return c.str(); });
        }
        emit(out_path, doc);
        return rc;
      }

      if (*c_a2) {
        A2Point p = point_from_flags(theta_str, alphas_str);
        json doc;
        doc["manifest"] = make_manifest("a2-classify", theta_str + "|" + alphas_str,
                                        floating, seed);
        doc["point"] = point_json(p);
        json cj = classify_point(p);
        for (auto& [k, v] : cj.items()) doc[k] = v;
        emit(out_path, doc);
        return cj.contains("boundary") ? 1 : 0;
      }

      if (*c_wcf) {
        A2Point p = point_from_flags(theta_str, alphas_str);
        auto ts = split_rats(thetas_str, 3);
        std::vector<int> cutoff = split_ints(cutoff_str);
        if (q_list.empty()) q_list = {2};
        StabCase the_case;
        if (!case_str.empty()) {
          the_case = case_from_name(case_str);
        } else {
          auto cs = a2_classify(p);
          if (cs.empty()) {
            json doc;
            doc["manifest"] = make_manifest("wcf-verify", thetas_str, floating, seed);
            doc["point"] = point_json(p);
            doc["pass"] = false;
            doc["detail"] = "no admissible case at this point";
            emit(out_path, doc);
            return 1;
          }
          if (cs.size() > 1) throw ParseFail("ambiguous chamber; pick one with --case");
          the_case = *cs.begin();
        }
        A2Slicing sl = slicing_for_case(p, the_case);
        json doc;
        doc["manifest"] = make_manifest("wcf-verify", thetas_str + "@" + theta_str + alphas_str,
                                        floating, seed);
        doc["point"] = point_json(p);
        doc["case"] = stab_case_name(the_case);
        doc["cutoff"] = cutoff;
        bool all = true;
        json results = json::array();
        for (long long q : q_list) {
          WcfReport rep = wcf_verify(sl, ts[0], ts[1], ts[2], q, cutoff);
          json r;
          r["q"] = q;
          r["pass"] = rep.pass;
          if (!rep.pass) r["detail"] = rep.detail;
          results.push_back(r);
          all = all && rep.pass;
        }
        doc["results"] = results;
        doc["pass"] = all;
        emit(out_path, doc);
        return all ? 0 : 1;
      }

      if (*c_reg) {
        if (grid_n < 1 || grid_n > 2000) throw ParseFail("grid out of range");
        json doc;
        doc["manifest"] =
            make_manifest("regions", "grid=" + std::to_string(grid_n), floating, seed);
        doc["grid"] = grid_n;
        std::vector<json> rows((size_t)grid_n * grid_n);
        std::atomic<int> next{0};
        auto worker = [&]() {
          int i;
          while ((i = next.fetch_add(1)) < grid_n) {
            for (int j = 0; j < grid_n; ++j) {
              Rational a1 = Rational(6 * i + 3, grid_n) - Rational(3);
              Rational a2 = Rational(6 * j + 3, grid_n) - Rational(3);
              A2Point p = a2_from_alphas(a1, a2);
              json r;
              r["i"] = i;
              r["j"] = j;
              r["alpha1"] = a1.str();
              r["alpha2"] = a2.str();
              json cj = classify_point(p);
              for (auto& [k, v] : cj.items()) r[k] = v;
              rows[(size_t)i * grid_n + j] = std::move(r);
            }
          }
        };
        int nt = thread_budget();
        std::vector<std::thread> pool;
        for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        json pts = json::array();
        for (auto& r : rows) pts.push_back(std::move(r));
        doc["points"] = pts;
        emit(out_path, doc);
        return 0;
      }

      if (*c_oracle) {
        if (q_list.empty()) q_list = {3};
        std::vector<int> cutoff = split_ints(cutoff_str);
        if (cutoff.size() != 2) throw ParseFail("hall-oracle wants a two-vertex cutoff");
        json doc;
        doc["manifest"] = make_manifest("hall-oracle", cutoff_str, floating, seed);

        // every multiplicity vector over the three roots within the cutoff
        std::vector<ObjClass> classes;
        for (int a = 0; a <= cutoff[0]; ++a)
          for (int b = 0; b <= cutoff[1]; ++b)
            for (int c = 0; c <= std::min(cutoff[0], cutoff[1]); ++c) {
              if (a + c > cutoff[0] || b + c > cutoff[1]) continue;
              ObjClass cls;
              if (a) cls[Indec(0, 1, 0)] = a;
              if (b) cls[Indec(1, 2, 0)] = b;
              if (c) cls[Indec(0, 2, 0)] = c;
              classes.push_back(cls);
            }
        long long mismatches = 0, pairs = 0;
        std::string first;
        for (long long q : q_list)
          for (const auto& x : classes)
            for (const auto& y : classes) {
              auto dx = class_dims(x, 2), dy = class_dims(y, 2);
              if (dx[0] + dy[0] > cutoff[0] || dx[1] + dy[1] > cutoff[1]) continue;
              ++pairs;
              if (hall_pair(q, 2, x, y) != fq_hall_product(q, x, y, cutoff)) {
                ++mismatches;
                if (first.empty())
                  first = "pair mismatch at q=" + std::to_string(q);
              }
            }

        // associativity of the derived product on shifted generators
        std::vector<Indec> gens;
        for (const Indec& b : {Indec(0, 1, 0), Indec(1, 2, 0), Indec(0, 2, 0)})
          for (int s : {0, 1}) gens.push_back(b.shifted(s));
        std::vector<std::array<int, 3>> triples;
        for (size_t i = 0; i < gens.size(); ++i)
          for (size_t j = 0; j < gens.size(); ++j)
            for (size_t k = 0; k < gens.size(); ++k)
              triples.push_back({(int)i, (int)j, (int)k});
        if (sample > 0 && (size_t)sample < triples.size()) {
          std::mt19937_64 rng((unsigned long long)seed);
          std::shuffle(triples.begin(), triples.end(), rng);
          triples.resize(sample);
        }
        long long checked = 0;
        for (long long q : q_list)
          for (const auto& t : triples) {
            HallDist X{{ObjClass{{gens[t[0]], 1}}, BigRat(1)}};
            HallDist Y{{ObjClass{{gens[t[1]], 1}}, BigRat(1)}};
            HallDist Z{{ObjClass{{gens[t[2]], 1}}, BigRat(1)}};
            auto left = hall_pair_mul(q, 2, hall_pair_mul(q, 2, X, Y), Z);
            auto right = hall_pair_mul(q, 2, X, hall_pair_mul(q, 2, Y, Z));
            ++checked;
            if (left != right) {
              ++mismatches;
              if (first.empty())
                first = "associativity mismatch at q=" + std::to_string(q);
            }
          }
        doc["pairs"] = pairs;
        doc["triples"] = checked;
        doc["mismatches"] = mismatches;
        if (!first.empty()) doc["first"] = first;
        doc["pass"] = mismatches == 0;
        emit(out_path, doc);
        return mismatches == 0 ? 0 : 1;
      }
    } catch (const ParseFail& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const json::exception& e) {
      std::cerr << "error: bad input JSON: " << e.what() << "\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
