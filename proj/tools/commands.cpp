#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace irs::tools {

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t factorial_capped(std::uint64_t m, std::uint64_t cap) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= m; ++i) {
    f *= i;
    if (f > cap) return f;
  }
  return f;
}

std::uint64_t max_stage_for(std::uint64_t blocks) {
  std::uint64_t m = 1;
  while (factorial_capped(m + 1, blocks) <= blocks) ++m;
  return m;
}

std::uint32_t least_t(const Rational& eps) { return density_tail_index(eps); }

AlphaFamilySpec::Kind family_from_string(const std::string& s) {
  if (s == "cyclic") return AlphaFamilySpec::Kind::cyclic;
  if (s == "cyclic_top") return AlphaFamilySpec::Kind::cyclic_top;
  if (s == "random") return AlphaFamilySpec::Kind::random;
  throw std::invalid_argument("config: unknown alpha family \"" + s + "\"");
}

std::map<std::uint32_t, FiniteAction> load_alpha_files(
    const std::map<std::uint32_t, std::string>& files) {
  std::map<std::uint32_t, FiniteAction> out;
  for (const auto& [n, path] : files) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open action file " + path);
    json j;
    in >> j;
    out.emplace(n, action_from_json(j));
  }
  return out;
}

std::string family_to_string(AlphaFamilySpec::Kind k) {
  switch (k) {
    case AlphaFamilySpec::Kind::cyclic: return "cyclic";
    case AlphaFamilySpec::Kind::cyclic_top: return "cyclic_top";
    case AlphaFamilySpec::Kind::random: return "random";
  }
  return "?";
}

struct Context {
  Schedule schedule;
  std::map<std::uint32_t, FiniteAction> alphas;
  std::uint32_t family_max_n = 0;
};

Context make_context(const RunConfig& c) {
  Context ctx;
  std::uint32_t need = std::max(c.max_n, c.target_n + 1);
  for (const auto& eps : c.epsilons) need = std::max(need, least_t(eps));
  ctx.family_max_n = need;
  if (c.alpha_files.empty()) {
    ctx.alphas = build_alpha_family(c.alpha, need);
  } else {
    ctx.alphas = load_alpha_files(c.alpha_files);
    for (std::uint32_t n = 1; n <= need; ++n)
      if (!ctx.alphas.count(n))
        throw std::invalid_argument("config: alpha files must cover n = 1.." +
                                    std::to_string(need) + "; missing " + std::to_string(n));
  }
  std::map<std::uint32_t, std::uint64_t> weights;
  for (std::uint32_t n = 1; n <= c.max_n; ++n) weights[n] = ctx.alphas.at(n).size() + 1;
  ctx.schedule = Schedule::build(weights, c.max_n, c.horizon);
  return ctx;
}

std::vector<std::uint64_t> family_sizes(const Context& ctx, std::uint32_t t) {
  std::vector<std::uint64_t> sizes;
  for (std::uint32_t i = 1; i <= t; ++i) sizes.push_back(ctx.alphas.at(i).size());
  return sizes;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  const json& a = j.at("alpha");
  if (a.at("family").get<std::string>() == "files") {
    for (const auto& [k, v] : a.at("files").items())
      c.alpha_files[static_cast<std::uint32_t>(std::stoul(k))] = v.get<std::string>();
  } else {
    c.alpha.kind = family_from_string(a.at("family").get<std::string>());
  }
  c.alpha.seed = a.value("seed", std::uint64_t{0});
  if (a.contains("sizes"))
    for (const auto& [k, v] : a.at("sizes").items())
      c.alpha.sizes[static_cast<std::uint32_t>(std::stoul(k))] = v.get<std::uint64_t>();
  c.max_n = j.at("max_n").get<std::uint32_t>();
  c.horizon = j.at("horizon").get<std::uint64_t>();
  c.blocks = j.at("blocks").get<std::uint64_t>();
  c.stage = j.value("stage", std::uint64_t{1});
  c.target_n = j.value("target_n", std::uint32_t{1});
  for (const auto& e : j.value("epsilons", json::array()))
    c.epsilons.push_back(parse_rational(e.get<std::string>()));
  for (const auto& cs : j.value("clopen_sets", json::array()))
    c.clopen_sets.push_back(clopen_from_json(cs));
  for (const auto& w : j.value("conjugators", json::array()))
    c.conjugators.push_back(Word::parse(w.get<std::string>()));
  for (const auto& s : j.value("theta_stages", json::array()))
    c.theta_stages.push_back(s.get<std::uint64_t>());
  for (const auto& g : j.value("dot_top_generators", json::array()))
    c.dot_top_generators.push_back(g.get<std::uint32_t>());
  c.edge_generator_cap = j.value("edge_generator_cap", std::uint32_t{64});
  validate(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  json sizes = json::object();
  for (const auto& [k, v] : c.alpha.sizes) sizes[std::to_string(k)] = v;
  json eps = json::array(), clopens = json::array(), conj = json::array();
  for (const auto& e : c.epsilons) eps.push_back(to_string(e));
  for (const auto& cs : c.clopen_sets) clopens.push_back(clopen_to_json(cs));
  for (const auto& w : c.conjugators) conj.push_back(w.str());
  json alpha;
  if (c.alpha_files.empty()) {
    alpha = json{{"family", family_to_string(c.alpha.kind)},
                 {"seed", c.alpha.seed},
                 {"sizes", sizes}};
  } else {
    json files = json::object();
    for (const auto& [k, v] : c.alpha_files) files[std::to_string(k)] = v;
    alpha = json{{"family", "files"}, {"files", files}};
  }
  return json{{"alpha", alpha},
              {"max_n", c.max_n},
              {"horizon", c.horizon},
              {"blocks", c.blocks},
              {"stage", c.stage},
              {"target_n", c.target_n},
              {"epsilons", eps},
              {"clopen_sets", clopens},
              {"conjugators", conj},
              {"theta_stages", c.theta_stages},
              {"dot_top_generators", c.dot_top_generators},
              {"edge_generator_cap", c.edge_generator_cap}};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  in >> j;
  return config_from_json(j);
}

void validate(const RunConfig& c) {
  if (c.blocks == 0) throw std::invalid_argument("config: blocks must be positive");
  if (c.horizon < c.blocks + 1)
    throw std::invalid_argument("config: horizon must exceed blocks");
  if (factorial_capped(c.stage, c.blocks) > c.blocks)
    throw std::invalid_argument("config: stage! must be at most blocks");
  if (c.target_n < 1 || c.target_n > c.max_n)
    throw std::invalid_argument("config: target_n must lie in 1..max_n");
  for (const auto& e : c.epsilons)
    if (e <= Rational(0) || e >= Rational(1))
      throw std::invalid_argument("config: epsilons must lie in (0,1)");
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

std::string config_hash(const RunConfig& c) { return fnv1a_hex(config_to_json(c).dump()); }

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

json build_verify_report(const RunConfig& c, unsigned jobs) {
  Context ctx = make_context(c);
  GluedTruncation b(ctx.alphas, ctx.schedule, c.blocks);
  bool all_passed = true;

  json report;
  report["version"] = kVersion;
  report["config_hash"] = config_hash(c);

  // schedule checks
  json hitting = json::object();
  for (std::uint32_t n = 1; n <= c.max_n; ++n) {
    const std::uint64_t K = ctx.schedule.K(n);
    const std::uint64_t i_max = ctx.schedule.horizon() / K - 1;
    const bool ok = ctx.schedule.check_hitting(n, i_max);
    hitting[std::to_string(n)] = ok;
    all_passed = all_passed && ok;
  }
  report["schedule"] =
      json{{"max_n", c.max_n}, {"K", schedule_to_json(ctx.schedule)["K"]}, {"hitting", hitting}};

  json density = json::array();
  for (const auto& eps : c.epsilons) {
    DensityReport r = ctx.schedule.check_density(eps, ctx.schedule.horizon());
    density.push_back(density_report_to_json(r));
    all_passed = all_passed && r.tail_bound_ok && r.per_n_bound_ok;
  }
  report["density"] = density;

  // exact invariance over the clopen/conjugator grid
  EmpiricalIRS e(b, c.stage);
  json inv_rows = json::array();
  bool all_equal = true;
  for (const auto& cs : c.clopen_sets) {
    for (const auto& g : c.conjugators) {
      InvarianceCheck chk = e.check_invariance(cs, g);
      inv_rows.push_back(json{{"clopen", cs.id},
                              {"conjugator", g.str()},
                              {"conjugated", to_string(chk.conjugated)},
                              {"original", to_string(chk.original)},
                              {"equal", chk.equal}});
      all_equal = all_equal && chk.equal;
    }
  }
  all_passed = all_passed && all_equal;
  report["invariance"] = json{{"stage", c.stage},
                              {"support", e.support_size()},
                              {"rows", inv_rows},
                              {"all_equal", all_equal}};

  // witness chains over every eligible support point, per epsilon's t
  json navigation_rows = json::array();
  for (const auto& eps : c.epsilons) {
    const std::uint32_t t = least_t(eps);
    std::uint64_t eligible = 0, verified = 0;
    json failures = json::array(), witnesses = json::array();
    for (std::uint64_t id = 0; id < e.support_size(); ++id) {
      const GluedPoint p = b.point_of(id);
      if (ctx.schedule.f(p.block) > t) continue;
      ++eligible;
      try {
        NavigationWitness w = navigate(b, p, c.target_n, t);
        if (replay_navigation(b, w)) {
          ++verified;
          if (e.support_size() <= 200) witnesses.push_back(witness_to_json(w));
        } else {
          failures.push_back(json{{"point", p.str()}, {"reason", "replay mismatch"}});
        }
      } catch (const NavigationError& err) {
        failures.push_back(
            json{{"point", p.str()}, {"stage", err.stage}, {"reason", err.what()}});
      }
    }
    all_passed = all_passed && (verified == eligible);
    navigation_rows.push_back(json{{"epsilon", to_string(eps)},
                          {"t", t},
                          {"n", c.target_n},
                          {"eligible", eligible},
                          {"verified", verified},
                          {"failures", failures},
                          {"witnesses", witnesses}});
  }
  report["navigation"] = navigation_rows;

  // appearance statistics at every available stage
  json statistic_rows = json::array();
  const std::uint64_t top_stage = max_stage_for(c.blocks);
  for (const auto& eps : c.epsilons) {
    const std::uint32_t t = least_t(eps);
    const auto sizes = family_sizes(ctx, std::max(t, c.target_n));
    const StagedProduct q =
        make_q_stages(std::max(t, c.target_n), c.target_n, ctx.schedule.K(c.target_n), sizes);
    for (std::uint64_t m = 1; m <= top_stage; ++m) {
      EmpiricalIRS em(b, m);
      const Rational stat = em.appearance_statistic(c.target_n, q, jobs);
      // lower bound: mass of the blocks with f(j) <= t, two computations
      const std::uint64_t mfact = factorial_capped(m, c.blocks);
      std::uint64_t direct = 0;
      for (std::uint64_t j = 0; j < mfact; ++j)
        if (ctx.schedule.f(j) <= t) direct += b.block_size(j) + 1;
      std::uint64_t weighted = 0;
      for (std::uint32_t nn = 1; nn <= std::min(t, c.max_n); ++nn)
        weighted += ctx.schedule.g(nn) * ctx.schedule.count_below(nn, mfact);
      const Rational bound(static_cast<long long>(direct),
                           static_cast<long long>(em.support_size()));
      const bool identity_ok = direct == weighted;
      const bool dominates = stat >= bound;
      const bool exceeds = stat > Rational(1) - eps;
      all_passed = all_passed && identity_ok && dominates && exceeds;
      statistic_rows.push_back(json{{"epsilon", to_string(eps)},
                            {"t", t},
                            {"n", c.target_n},
                            {"q", q.description},
                            {"stage", m},
                            {"support", em.support_size()},
                            {"statistic", to_string(stat)},
                            {"lower_bound", to_string(bound)},
                            {"identity_ok", identity_ok},
                            {"dominates_bound", dominates},
                            {"exceeds_1_minus_eps", exceeds},
                            {"passed", identity_ok && dominates && exceeds}});
    }
  }
  report["statistics"] = statistic_rows;
  report["all_passed"] = all_passed;
  return report;
}

int cmd_schedule(const RunConfig& c, const std::string& out_dir) {
  Context ctx = make_context(c);
  write_file_atomic(out_dir + "/schedule.json", schedule_to_json(ctx.schedule).dump(2) + "\n");
  bool ok = true;
  std::ostringstream csv;
  csv << density_report_csv_header() << '\n';
  for (const auto& eps : c.epsilons) {
    DensityReport r = ctx.schedule.check_density(eps, ctx.schedule.horizon());
    csv << density_report_csv_row(r) << '\n';
    ok = ok && r.tail_bound_ok && r.per_n_bound_ok;
  }
  write_file_atomic(out_dir + "/density.csv", csv.str());
  for (std::uint32_t n = 1; n <= c.max_n; ++n) {
    const std::uint64_t i_max = ctx.schedule.horizon() / ctx.schedule.K(n) - 1;
    ok = ok && ctx.schedule.check_hitting(n, i_max);
  }
  return ok ? 0 : 1;
}

int cmd_build(const RunConfig& c, const std::string& out_dir) {
  Context ctx = make_context(c);
  GluedTruncation b(ctx.alphas, ctx.schedule, c.blocks);
  const auto cap = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(c.edge_generator_cap, b.chain_generator(b.blocks() - 1)));
  write_file_atomic(out_dir + "/truncation.json", truncation_to_json(b, cap).dump(2) + "\n");
  json alphas = json::object();
  for (const auto& [n, a] : ctx.alphas) alphas[std::to_string(n)] = action_to_json(a);
  write_file_atomic(out_dir + "/alphas.json", alphas.dump(2) + "\n");
  std::vector<std::uint32_t> top = c.dot_top_generators;
  if (top.empty()) {
    std::set<std::uint32_t> links;
    for (std::uint64_t j = 0; j < b.blocks(); ++j)
      links.insert(static_cast<std::uint32_t>(b.link_generator(j)));
    top.assign(links.begin(), links.end());
  }
  write_file_atomic(out_dir + "/truncation.dot", truncation_to_dot(b, top));
  return 0;
}

int cmd_theta(const RunConfig& c, const std::string& out_dir) {
  Context ctx = make_context(c);
  GluedTruncation b(ctx.alphas, ctx.schedule, c.blocks);
  std::vector<std::uint64_t> stages = c.theta_stages;
  if (stages.empty()) stages.push_back(c.stage);

  std::ostringstream csv;
  csv << "stage,clopen,numerator,denominator\n";
  std::map<std::string, std::pair<Rational, Rational>> range;  // id -> (min, max)
  for (auto m : stages) {
    EmpiricalIRS e(b, m);
    for (const auto& cs : c.clopen_sets) {
      const Rational v = e.theta(cs);
      csv << m << ',' << cs.id << ',' << v.numerator() << ',' << v.denominator() << '\n';
      auto it = range.find(cs.id);
      if (it == range.end())
        range.emplace(cs.id, std::make_pair(v, v));
      else {
        it->second.first = std::min(it->second.first, v);
        it->second.second = std::max(it->second.second, v);
      }
    }
  }
  write_file_atomic(out_dir + "/theta.csv", csv.str());

  json summary = json::object();
  for (const auto& cs : c.clopen_sets) {
    auto it = range.find(cs.id);
    if (it == range.end()) continue;
    summary[cs.id] = json{{"min", to_string(it->second.first)},
                          {"max", to_string(it->second.second)},
                          {"oscillation", to_string(it->second.second - it->second.first)},
                          {"contradictory", cs.contradictory()}};
  }
  write_file_atomic(out_dir + "/theta_summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_verify(const RunConfig& c, const std::string& out_dir, unsigned jobs) {
  json report = build_verify_report(c, jobs);
  write_file_atomic(out_dir + "/report.json", report.dump(2) + "\n");
  return report["all_passed"].get<bool>() ? 0 : 1;
}

int cmd_appears(const RunConfig& c, const std::string& out_dir, const std::string& point,
                std::optional<std::uint32_t> n_opt, std::optional<std::uint32_t> t_opt) {
  Context ctx = make_context(c);
  GluedTruncation b(ctx.alphas, ctx.schedule, c.blocks);
  const std::uint32_t n = n_opt.value_or(c.target_n);
  const std::uint32_t t =
      t_opt.value_or(c.epsilons.empty() ? n : least_t(c.epsilons.front()));
  const GluedPoint p = GluedPoint::parse(point);
  const auto sizes = family_sizes(ctx, std::max(t, n));
  const StagedProduct q = make_q_stages(std::max(t, n), n, ctx.schedule.K(n), sizes);
  OrbitResult region = b.orbit(b.id_of(p), q);

  json out{{"point", p.str()},
           {"n", n},
           {"t", t},
           {"region_size", region.ids.size()},
           {"region_exited", region.exited},
           {"region_unresolved", region.unresolved}};
  GluedView view(b);
  auto emb = appears_in(b.alpha(n), n, view, region.ids);
  out["appears"] = emb.has_value();
  if (emb) out["embedding"] = embedding_to_json(*emb, b);
  write_file_atomic(out_dir + "/appears.json", out.dump(2) + "\n");
  return emb ? 0 : 1;
}

int cmd_navigate(const RunConfig& c, const std::string& out_dir, const std::string& point,
                 std::optional<std::uint32_t> n_opt, std::optional<std::uint32_t> t_opt) {
  Context ctx = make_context(c);
  GluedTruncation b(ctx.alphas, ctx.schedule, c.blocks);
  const std::uint32_t n = n_opt.value_or(c.target_n);
  const std::uint32_t t =
      t_opt.value_or(c.epsilons.empty() ? n : least_t(c.epsilons.front()));
  const GluedPoint p = GluedPoint::parse(point);
  json out{{"point", p.str()}, {"n", n}, {"t", t}};
  try {
    NavigationWitness w = navigate(b, p, n, t);
    const bool ok = replay_navigation(b, w);
    out["witness"] = witness_to_json(w);
    out["replayed"] = ok;
    write_file_atomic(out_dir + "/navigate.json", out.dump(2) + "\n");
    return ok ? 0 : 1;
  } catch (const NavigationError& err) {
    out["failed_stage"] = err.stage;
    out["frontier"] = err.frontier;
    out["error"] = err.what();
    write_file_atomic(out_dir + "/navigate.json", out.dump(2) + "\n");
    return 1;
  }
}

}  // namespace irs::tools
