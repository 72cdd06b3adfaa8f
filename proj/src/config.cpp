#include "pagame/config.hpp"

#include "json.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace pagame {

using nlohmann::json;

namespace {

template <typename Enum>
struct NamePair {
  Enum value;
  const char* name;
};

constexpr NamePair<Algorithm> kAlgorithms[] = {
    {Algorithm::iid_online, "iid-online"},
    {Algorithm::iid_offline, "iid-offline"},
    {Algorithm::explore, "explore"},
    {Algorithm::oracle_explore, "oracle-explore"},
    {Algorithm::linear, "linear"},
};
constexpr NamePair<AgentKind> kAgentKinds[] = {
    {AgentKind::greedy_learner, "greedy-learner"},
    {AgentKind::exploratory_learner, "exploratory-learner"},
    {AgentKind::oracle, "oracle"},
    {AgentKind::exploratory_oracle, "exploratory-oracle"},
};
constexpr NamePair<ExplorePolicy> kPolicies[] = {
    {ExplorePolicy::uniform, "uniform"},
    {ExplorePolicy::fixed_arm, "fixed-arm"},
    {ExplorePolicy::adversarial_lowest_joint_mean, "adversarial-lowest-joint-mean"},
};
constexpr NamePair<TieRule> kTieRules[] = {
    {TieRule::lowest_index, "lowest-index"},
    {TieRule::highest_index, "highest-index"},
};
constexpr NamePair<ModelSpec::Kind> kModelKinds[] = {
    {ModelSpec::Kind::iid, "iid"},
    {ModelSpec::Kind::linear, "linear"},
    {ModelSpec::Kind::iid_random, "iid-random"},
    {ModelSpec::Kind::linear_random, "linear-random"},
};
constexpr NamePair<RewardDistribution::Shape> kShapes[] = {
    {RewardDistribution::Shape::bernoulli, "bernoulli"},
    {RewardDistribution::Shape::uniform, "uniform"},
    {RewardDistribution::Shape::point, "point"},
};

template <typename Enum, std::size_t N>
std::string name_of(const NamePair<Enum> (&table)[N], Enum value) {
  for (const auto& p : table)
    if (p.value == value) return p.name;
  throw ConfigError("unnamed enum value");
}

template <typename Enum, std::size_t N>
Enum value_of(const NamePair<Enum> (&table)[N], const std::string& name, const char* what) {
  for (const auto& p : table)
    if (name == p.name) return p.value;
  std::string msg = std::string("unknown ") + what + " '" + name + "'; expected one of:";
  for (const auto& p : table) msg += std::string(" ") + p.name;
  throw ConfigError(msg);
}

json vec_to_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vec vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json dist_to_json(const RewardDistribution& d) {
  json j{{"shape", name_of(kShapes, d.shape)}};
  switch (d.shape) {
    case RewardDistribution::Shape::bernoulli: j["mean"] = d.lo; break;
    case RewardDistribution::Shape::point: j["value"] = d.lo; break;
    case RewardDistribution::Shape::uniform:
      j["lo"] = d.lo;
      j["hi"] = d.hi;
      break;
  }
  return j;
}

RewardDistribution dist_from_json(const json& j) {
  switch (value_of(kShapes, j.at("shape").get<std::string>(), "reward shape")) {
    case RewardDistribution::Shape::bernoulli: return RewardDistribution::bernoulli(j.at("mean").get<double>());
    case RewardDistribution::Shape::point: return RewardDistribution::point(j.at("value").get<double>());
    case RewardDistribution::Shape::uniform:
      return RewardDistribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
  }
  throw ConfigError("bad reward shape");
}

json model_to_json(const ModelSpec& m) {
  json j{{"kind", name_of(kModelKinds, m.kind)}};
  switch (m.kind) {
    case ModelSpec::Kind::iid: {
      json p = json::array(), a = json::array();
      for (const auto& d : m.principal) p.push_back(dist_to_json(d));
      for (const auto& d : m.agent) a.push_back(dist_to_json(d));
      j["principal"] = p;
      j["agent"] = a;
      break;
    }
    case ModelSpec::Kind::linear: {
      json rows = json::array();
      for (Eigen::Index r = 0; r < m.arms.rows(); ++r) rows.push_back(vec_to_json(m.arms.row(r).transpose()));
      j["arms"] = rows;
      j["s_star"] = vec_to_json(m.s_star);
      j["nu_star"] = vec_to_json(m.nu_star);
      j["agent_sigma"] = m.agent_sigma;
      j["principal_sigma"] = m.principal_sigma;
      break;
    }
    case ModelSpec::Kind::iid_random:
      j["K"] = m.num_arms;
      j["shape"] = name_of(kShapes, m.shape);
      j["instance_seed"] = m.instance_seed;
      break;
    case ModelSpec::Kind::linear_random:
      j["K"] = m.num_arms;
      j["d"] = m.dim;
      j["agent_sigma"] = m.agent_sigma;
      j["principal_sigma"] = m.principal_sigma;
      j["instance_seed"] = m.instance_seed;
      break;
  }
  return j;
}

ModelSpec model_from_json(const json& j) {
  ModelSpec m;
  m.kind = value_of(kModelKinds, j.at("kind").get<std::string>(), "model kind");
  switch (m.kind) {
    case ModelSpec::Kind::iid:
      for (const auto& d : j.at("principal")) m.principal.push_back(dist_from_json(d));
      for (const auto& d : j.at("agent")) m.agent.push_back(dist_from_json(d));
      break;
    case ModelSpec::Kind::linear: {
      const auto& rows = j.at("arms");
      if (rows.empty()) throw ConfigError("linear model needs arms");
      const auto d = static_cast<Eigen::Index>(rows.at(0).size());
      m.arms.resize(static_cast<Eigen::Index>(rows.size()), d);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const Vec row = vec_from_json(rows[r]);
        if (row.size() != d) throw ConfigError("linear arms must share one dimension");
        m.arms.row(static_cast<Eigen::Index>(r)) = row.transpose();
      }
      m.s_star = vec_from_json(j.at("s_star"));
      m.nu_star = vec_from_json(j.at("nu_star"));
      m.agent_sigma = j.value("agent_sigma", 0.0);
      m.principal_sigma = j.value("principal_sigma", 0.0);
      break;
    }
    case ModelSpec::Kind::iid_random:
      m.num_arms = j.at("K").get<std::size_t>();
      m.shape = value_of(kShapes, j.value("shape", std::string("bernoulli")), "reward shape");
      m.instance_seed = j.value("instance_seed", std::uint64_t{0});
      break;
    case ModelSpec::Kind::linear_random:
      m.num_arms = j.at("K").get<std::size_t>();
      m.dim = j.at("d").get<std::size_t>();
      m.agent_sigma = j.value("agent_sigma", 0.0);
      m.principal_sigma = j.value("principal_sigma", 0.0);
      m.instance_seed = j.value("instance_seed", std::uint64_t{0});
      break;
  }
  return m;
}

json to_json(const ExperimentConfig& c) {
  const AgentBehavior& b = c.agent.behavior;
  json agent{{"kind", name_of(kAgentKinds, b.kind)},
             {"c0", b.c0},
             {"exploration_policy", name_of(kPolicies, b.policy)},
             {"fixed_arm", b.fixed_arm},
             {"tie_rule", name_of(kTieRules, b.tie_rule)}};
  if (c.agent.initial_means) agent["initial_means"] = vec_to_json(*c.agent.initial_means);
  if (c.agent.initial_estimate) agent["initial_estimate"] = vec_to_json(*c.agent.initial_estimate);
  return json{{"algorithm", to_string(c.algorithm)},
              {"horizon", c.horizon},
              {"delta", c.delta ? json(*c.delta) : json(nullptr)},
              {"gamma", c.gamma},
              {"principal", {{"c0", c.principal_c0}}},
              {"agent", agent},
              {"model", model_to_json(c.model)},
              {"mc", {{"n_samples", c.mc_samples}, {"kappa", c.mc_kappa}}},
              {"seeds", c.seeds},
              {"output_dir", c.output_dir},
              {"write_transcripts", c.write_transcripts}};
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  c.horizon = j.at("horizon").get<std::size_t>();
  if (j.contains("delta") && !j.at("delta").is_null()) c.delta = j.at("delta").get<double>();
  c.gamma = j.value("gamma", 1.0);
  if (j.contains("principal")) c.principal_c0 = j.at("principal").value("c0", 1.0);
  if (j.contains("agent")) {
    const json& a = j.at("agent");
    AgentBehavior& b = c.agent.behavior;
    b.kind = value_of(kAgentKinds, a.value("kind", std::string("greedy-learner")), "agent kind");
    b.c0 = a.value("c0", 0.0);
    b.policy = value_of(kPolicies, a.value("exploration_policy", std::string("uniform")), "exploration policy");
    b.fixed_arm = a.value("fixed_arm", std::size_t{0});
    b.tie_rule = value_of(kTieRules, a.value("tie_rule", std::string("lowest-index")), "tie rule");
    if (a.contains("initial_means")) c.agent.initial_means = vec_from_json(a.at("initial_means"));
    if (a.contains("initial_estimate")) c.agent.initial_estimate = vec_from_json(a.at("initial_estimate"));
  }
  c.model = model_from_json(j.at("model"));
  if (j.contains("mc")) {
    c.mc_samples = j.at("mc").value("n_samples", std::size_t{20000});
    c.mc_kappa = j.at("mc").value("kappa", 0.05);
  }
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.output_dir = j.value("output_dir", std::string("out"));
  c.write_transcripts = j.value("write_transcripts", true);
  return c;
}

Vec random_direction(Engine& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(static_cast<Eigen::Index>(dim));
  do {
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = g(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

bool is_linear(ModelSpec::Kind kind) {
  return kind == ModelSpec::Kind::linear || kind == ModelSpec::Kind::linear_random;
}

}  // namespace

std::string to_string(Algorithm algorithm) { return name_of(kAlgorithms, algorithm); }

Algorithm parse_algorithm(const std::string& name) { return value_of(kAlgorithms, name, "algorithm"); }

std::string to_json_text(const ExperimentConfig& config) { return to_json(config).dump(2); }

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  if (c.horizon < 2) throw ConfigError("horizon must be at least 2");
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (c.delta && !(*c.delta > 0.0 && *c.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (c.principal_c0 < 0.0) throw ConfigError("principal c0 must be nonnegative");
  if (c.agent.behavior.c0 < 0.0) throw ConfigError("agent c0 must be nonnegative");
  if (c.mc_samples < 100) throw ConfigError("mc n_samples must be at least 100");
  if (!(c.mc_kappa > 0.0 && c.mc_kappa < 0.5)) throw ConfigError("mc kappa must lie in (0, 0.5)");
  if (c.seeds.empty()) throw ConfigError("seed list is empty");

  const AgentKind kind = c.agent.behavior.kind;
  const bool linear_model = is_linear(c.model.kind);
  const bool explores = c.agent.behavior.explores();
  const bool oracle = c.agent.behavior.is_oracle();
  switch (c.algorithm) {
    case Algorithm::iid_online:
    case Algorithm::iid_offline:
      if (linear_model) throw ConfigError(to_string(c.algorithm) + " needs an i.i.d. model");
      if (explores) throw ConfigError(to_string(c.algorithm) + " needs a non-exploring agent (greedy-learner or oracle)");
      break;
    case Algorithm::explore:
      if (linear_model) throw ConfigError("explore needs an i.i.d. model");
      break;
    case Algorithm::oracle_explore:
      if (linear_model) throw ConfigError("oracle-explore needs an i.i.d. model");
      if (!oracle) throw ConfigError("oracle-explore needs an oracle or exploratory-oracle agent");
      break;
    case Algorithm::linear:
      if (!linear_model) throw ConfigError("linear needs a linear model");
      if (explores) throw ConfigError("linear needs a non-exploring agent (greedy-learner or oracle)");
      break;
  }
  if (kind == AgentKind::exploratory_learner && linear_model)
    throw ConfigError("exploratory agents are only modelled for i.i.d. rewards");

  const auto [arms, model] = build_environment(c);
  model.validate(arms);
  if (c.agent.behavior.policy == ExplorePolicy::fixed_arm && c.agent.behavior.fixed_arm >= arms.size())
    throw ConfigError("fixed exploration arm is out of range");
  if (c.agent.initial_means && static_cast<std::size_t>(c.agent.initial_means->size()) != arms.size())
    throw ConfigError("initial_means must have one entry per arm");
  if (c.agent.initial_estimate && linear_model &&
      static_cast<std::size_t>(c.agent.initial_estimate->size()) != arms.dim())
    throw ConfigError("initial_estimate must have dimension d");
}

std::pair<ArmSet, RewardModel> build_environment(const ExperimentConfig& config) {
  const ModelSpec& m = config.model;
  switch (m.kind) {
    case ModelSpec::Kind::iid:
      if (m.principal.size() != m.agent.size()) throw ConfigError("principal and agent reward lists differ in length");
      return {ArmSet::iid(m.principal.size()), RewardModel::iid(m.principal, m.agent)};
    case ModelSpec::Kind::linear:
      return {ArmSet::linear(m.arms), RewardModel::linear(m.s_star, m.nu_star, m.agent_sigma, m.principal_sigma)};
    case ModelSpec::Kind::iid_random: {
      Engine rng = StreamSeeder(m.instance_seed).stream("instance");
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      auto draw = [&]() {
        const double mean = unit(rng);
        switch (m.shape) {
          case RewardDistribution::Shape::bernoulli: return RewardDistribution::bernoulli(mean);
          case RewardDistribution::Shape::point: return RewardDistribution::point(mean);
          case RewardDistribution::Shape::uniform: {
            const double w = std::min(mean, 1.0 - mean);
            return RewardDistribution::uniform(mean - w, mean + w);
          }
        }
        return RewardDistribution::point(mean);
      };
      std::vector<RewardDistribution> p, a;
      for (std::size_t k = 0; k < m.num_arms; ++k) {
        p.push_back(draw());
        a.push_back(draw());
      }
      return {ArmSet::iid(m.num_arms), RewardModel::iid(p, a)};
    }
    case ModelSpec::Kind::linear_random: {
      if (m.dim == 0 || m.num_arms < m.dim) throw ConfigError("linear-random needs K >= d >= 1");
      Engine rng = StreamSeeder(m.instance_seed).stream("instance");
      std::uniform_real_distribution<double> radius(0.5, 1.0);
      Mat arms(static_cast<Eigen::Index>(m.num_arms), static_cast<Eigen::Index>(m.dim));
      for (Eigen::Index r = 0; r < arms.rows(); ++r) arms.row(r) = random_direction(rng, m.dim).transpose();
      const Vec s = radius(rng) * random_direction(rng, m.dim);
      const Vec nu = radius(rng) * random_direction(rng, m.dim);
      return {ArmSet::linear(arms), RewardModel::linear(s, nu, m.agent_sigma, m.principal_sigma)};
    }
  }
  throw ConfigError("unknown model kind");
}

GameSetup build_setup(const ExperimentConfig& config, std::uint64_t seed) {
  auto [arms, model] = build_environment(config);
  AgentBehavior behavior = config.agent.behavior;
  resolve_exploration_arm(behavior, model, arms);
  AgentState state = [&] {
    if (behavior.is_oracle()) return AgentState::pinned(model.agent_means(arms));
    if (arms.kind() == ArmKind::linear)
      return config.agent.initial_estimate ? AgentState::linear(arms, *config.agent.initial_estimate)
                                           : AgentState::linear(arms);
    return config.agent.initial_means ? AgentState::iid(*config.agent.initial_means) : AgentState::iid(arms.size());
  }();
  GameSetup setup{std::move(arms), std::move(model), behavior, std::move(state), config.horizon, StreamSeeder(seed)};
  return setup;
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {std::stoull(text)};
    const std::uint64_t a = std::stoull(text.substr(0, dots));
    const std::uint64_t b = std::stoull(text.substr(dots + 2));
    if (b < a) throw ConfigError("seed range must be ascending: " + text);
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
    return out;
  } catch (const std::logic_error&) {
    throw ConfigError("bad seed range '" + text + "'; expected N or A..B");
  }
}

}  // namespace pagame
