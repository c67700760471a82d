#include "cbsfs/serialize.hpp"

#include <stdexcept>

#include "json.hpp"

namespace cbsfs {

using nlohmann::json;

namespace {

const char* mode_name(RootMode m) { return m == RootMode::SampleMrca ? "sample_mrca" : "population_mrca"; }

RootMode mode_from(const std::string& s) {
  if (s == "sample_mrca") return RootMode::SampleMrca;
  if (s == "population_mrca") return RootMode::PopulationMrca;
  throw std::invalid_argument("replay_from_json: unknown root_mode " + s);
}

}  // namespace

std::string to_json(const ReplayRecord& r) {
  json nodes = json::array();
  for (const auto& nd : r.tree.nodes()) {
    json j = {{"id", nd.id}, {"time", nd.time}, {"parent", nd.parent}};
    j["leaf"] = nd.leaf_label ? json(*nd.leaf_label) : json(nullptr);
    nodes.push_back(std::move(j));
  }
  json muts = json::array();
  for (const auto& a : r.mutations.atoms) muts.push_back({a.edge, a.depth});

  json out = {
      {"schema_version", schema_version},
      {"seed", r.seed},
      {"replicate", r.replicate},
      {"params", {{"beta", r.params.beta}, {"theta", r.params.theta}, {"mu", r.params.mu}}},
      {"config",
       {{"n", r.config.n},
        {"e_g", r.config.e_g},
        {"e_d", r.config.e_d},
        {"z0", r.config.z0},
        {"spine_index", r.config.spine_index},
        {"positions", r.config.positions},
        {"labels", r.config.labels}}},
      {"zetas", r.zetas.zetas},
      {"tree", {{"root_mode", mode_name(r.tree.mode())}, {"nodes", std::move(nodes)}}},
      {"mutations", std::move(muts)},
  };
  return out.dump();
}

ReplayRecord replay_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != schema_version) {
      throw std::invalid_argument("replay_from_json: unsupported schema_version");
    }
    ReplayRecord r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.replicate = j.at("replicate").get<std::uint64_t>();
    const auto& p = j.at("params");
    r.params = {p.at("beta").get<double>(), p.at("theta").get<double>(), p.at("mu").get<double>()};
    r.params.validate();

    const auto& c = j.at("config");
    r.config.n = c.at("n").get<int>();
    r.config.e_g = c.at("e_g").get<double>();
    r.config.e_d = c.at("e_d").get<double>();
    r.config.z0 = c.at("z0").get<double>();
    r.config.spine_index = c.at("spine_index").get<int>();
    r.config.positions = c.at("positions").get<std::vector<double>>();
    r.config.labels = c.at("labels").get<std::vector<int>>();
    r.config.validate();

    r.zetas.zetas = j.at("zetas").get<std::vector<double>>();
    r.zetas.validate(r.config);

    std::vector<TreeNode> nodes;
    for (const auto& nj : j.at("tree").at("nodes")) {
      TreeNode nd{nj.at("id").get<int>(), nj.at("time").get<double>(), nj.at("parent").get<int>(), std::nullopt};
      if (!nj.at("leaf").is_null()) nd.leaf_label = nj.at("leaf").get<int>();
      nodes.push_back(nd);
    }
    r.tree = GenealogyTree(std::move(nodes), mode_from(j.at("tree").at("root_mode").get<std::string>()));

    for (const auto& m : j.at("mutations")) {
      r.mutations.atoms.push_back({m.at(0).get<int>(), m.at(1).get<double>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("replay_from_json: ") + e.what());
  }
}

}  // namespace cbsfs
