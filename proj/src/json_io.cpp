#include "irs/json_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace irs {

json action_to_json(const FiniteAction& a) {
  json perms = json::object();
  for (const auto& [gen, p] : a.perms()) perms[std::to_string(gen)] = p.fwd;
  return json{{"size", a.size()}, {"perms", perms}};
}

FiniteAction action_from_json(const json& j) {
  std::map<std::uint32_t, std::vector<std::uint64_t>> perms;
  for (const auto& [key, images] : j.at("perms").items())
    perms[static_cast<std::uint32_t>(std::stoul(key))] =
        images.get<std::vector<std::uint64_t>>();
  return FiniteAction(j.at("size").get<std::uint64_t>(), perms);
}

namespace {

json u64_map_to_json(const std::map<std::uint32_t, std::uint64_t>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

std::map<std::uint32_t, std::uint64_t> u64_map_from_json(const json& j) {
  std::map<std::uint32_t, std::uint64_t> out;
  for (const auto& [k, v] : j.items())
    out[static_cast<std::uint32_t>(std::stoul(k))] = v.get<std::uint64_t>();
  return out;
}

}  // namespace

json schedule_to_json(const Schedule& s) {
  return json{{"horizon", s.horizon()},
              {"f", s.values()},
              {"a", u64_map_to_json(s.a_map())},
              {"K", u64_map_to_json(s.K_map())},
              {"g", u64_map_to_json(s.g_map())}};
}

Schedule schedule_from_json(const json& j) {
  auto f = j.at("f").get<std::vector<std::uint32_t>>();
  if (j.contains("horizon") && j.at("horizon").get<std::uint64_t>() != f.size())
    throw std::invalid_argument("schedule_from_json: horizon disagrees with |f|");
  return Schedule::from_values(std::move(f), u64_map_from_json(j.at("K")),
                               u64_map_from_json(j.at("g")),
                               j.contains("a") ? u64_map_from_json(j.at("a"))
                                               : std::map<std::uint32_t, std::uint64_t>{});
}

json truncation_to_json(const GluedTruncation& b, std::uint32_t max_gen) {
  json edges = json::object();
  for (const auto& [gen, list] : b.realized_edges(max_gen)) {
    json rows = json::array();
    for (const auto& [from, to] : list)
      rows.push_back(json::array({b.point_of(from).str(), b.point_of(to).str()}));
    edges[std::to_string(gen)] = std::move(rows);
  }
  json links = json::array(), chains = json::array();
  for (std::uint64_t j = 0; j < b.blocks(); ++j) links.push_back(b.link_generator(j));
  for (std::uint64_t j = 0; j < b.blocks(); ++j) chains.push_back(b.chain_generator(j));
  return json{{"blocks", b.blocks()},
              {"points", b.points()},
              {"link_generators", links},
              {"chain_generators", chains},
              {"edges", edges}};
}

std::string truncation_to_dot(const GluedTruncation& b,
                              const std::vector<std::uint32_t>& top_generators) {
  std::ostringstream out;
  out << "digraph glued {\n  rankdir=LR;\n";
  for (std::uint64_t j = 0; j < b.blocks(); ++j) {
    out << "  W" << j << " [shape=box, label=\"W" << j << " (" << b.block_size(j) << ")\"];\n";
    out << "  u" << j << " [shape=point, xlabel=\"u" << j << "\"];\n";
  }
  for (std::uint64_t j = 0; j < b.blocks(); ++j)
    out << "  W" << j << " -> u" << j << " [dir=none, label=\"g" << b.link_generator(j)
        << "\"];\n";
  for (std::uint64_t j = 0; j + 1 < b.blocks(); ++j)
    out << "  W" << j << " -> W" << j + 1 << " [dir=none, label=\"g" << b.chain_generator(j)
        << "\"];\n";
  std::set<std::uint32_t> gens(top_generators.begin(), top_generators.end());
  const auto edges = b.realized_edges(
      gens.empty() ? 0 : *gens.rbegin());
  for (auto gen : gens) {
    auto it = edges.find(gen);
    if (it == edges.end()) continue;
    for (const auto& [from, to] : it->second) {
      const GluedPoint p = b.point_of(from), q = b.point_of(to);
      if (p.tag != GluedPoint::Tag::link || q.tag != GluedPoint::Tag::link) continue;
      out << "  u" << p.block << " -> u" << q.block << " [color=blue, label=\"g" << gen
          << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

json density_report_to_json(const DensityReport& r) {
  return json{{"epsilon", to_string(r.epsilon)},
              {"t", r.t},
              {"worst_m", r.worst_m},
              {"worst_ratio", to_string(r.worst_ratio)},
              {"tail_bound_ok", r.tail_bound_ok},
              {"per_n_bound_ok", r.per_n_bound_ok}};
}

std::string density_report_csv_header() {
  return "epsilon,t,worst_m,worst_ratio,tail_bound_ok,per_n_bound_ok";
}

std::string density_report_csv_row(const DensityReport& r) {
  std::ostringstream out;
  out << to_string(r.epsilon) << ',' << r.t << ',' << r.worst_m << ',' << to_string(r.worst_ratio)
      << ',' << (r.tail_bound_ok ? "true" : "false") << ','
      << (r.per_n_bound_ok ? "true" : "false");
  return out.str();
}

json clopen_to_json(const ClopenSet& c) {
  json in = json::array(), out = json::array();
  for (const auto& w : c.in_words) in.push_back(w.str());
  for (const auto& w : c.out_words) out.push_back(w.str());
  return json{{"id", c.id}, {"in", in}, {"out", out}};
}

ClopenSet clopen_from_json(const json& j) {
  ClopenSet c;
  c.id = j.value("id", "");
  for (const auto& s : j.at("in")) c.in_words.push_back(Word::parse(s.get<std::string>()));
  for (const auto& s : j.at("out")) c.out_words.push_back(Word::parse(s.get<std::string>()));
  return c;
}

json witness_to_json(const NavigationWitness& w) {
  json cover = json::array();
  for (const auto& word : w.cover) cover.push_back(word.str());
  const GluedPoint marked{GluedPoint::Tag::block, w.j, 0};
  const GluedPoint uj{GluedPoint::Tag::link, w.j, 0};
  const GluedPoint ul{GluedPoint::Tag::link, w.l, 0};
  json path = json::array(
      {w.start.str(), marked.str(), uj.str(), ul.str(), w.entry.str()});
  return json{{"start", w.start.str()},
              {"block", w.j},
              {"target_block", w.l},
              {"n", w.n},
              {"t", w.t},
              {"K", w.K},
              {"to_marked", w.to_marked.str()},
              {"to_link", w.to_link.str()},
              {"across", w.across.str()},
              {"into_block", w.into_block.str()},
              {"path", path},
              {"entry", w.entry.str()},
              {"cover", cover}};
}

json embedding_to_json(const Embedding& e, const GluedTruncation& b) {
  json image = json::array();
  for (std::uint64_t v = 0; v < e.image.size(); ++v)
    image.push_back(json::array({v, b.point_of(e.image[v]).str()}));
  return json{{"base_source", e.base_source},
              {"base_target", b.point_of(e.base_target).str()},
              {"image", image}};
}

}  // namespace irs
