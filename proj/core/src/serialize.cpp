#include "tabrl/serialize.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tabrl {

using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw std::runtime_error("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
void read_if_present(const json& obj, const char* key, T& out) {
    if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

const char* to_string(RewardMode mode) {
    return mode == RewardMode::terminal_only ? "terminal_only" : "intermittent";
}

RewardMode reward_mode_from(const std::string& name) {
    if (name == "terminal_only") return RewardMode::terminal_only;
    if (name == "intermittent") return RewardMode::intermittent;
    throw std::runtime_error("unknown reward mode '" + name + "'");
}

const char* to_string(ModelMode mode) {
    switch (mode) {
        case ModelMode::counting: return "counting";
        case ModelMode::leaky: return "leaky";
        case ModelMode::deterministic_overwrite: return "deterministic_overwrite";
    }
    return "?";
}

ModelMode model_mode_from(const std::string& name) {
    if (name == "counting") return ModelMode::counting;
    if (name == "leaky") return ModelMode::leaky;
    if (name == "deterministic_overwrite") return ModelMode::deterministic_overwrite;
    throw std::runtime_error("unknown model mode '" + name + "'");
}

const char* to_string(EpsilonStyle style) {
    return style == EpsilonStyle::exclusive ? "exclusive" : "inclusive";
}

EpsilonStyle epsilon_style_from(const std::string& name) {
    if (name == "exclusive") return EpsilonStyle::exclusive;
    if (name == "inclusive") return EpsilonStyle::inclusive;
    throw std::runtime_error("unknown epsilon style '" + name + "'");
}

}  // namespace

std::string to_json(const TabularMdp& mdp) {
    json doc;
    doc["format"] = "tabular-mdp-v1";
    doc["num_states"] = mdp.num_states;
    doc["num_actions"] = mdp.num_actions;
    doc["terminal"] = mdp.terminal;
    json initial = json::array();
    for (const auto& e : mdp.initial_states) initial.push_back({e.state, e.prob});
    doc["initial"] = std::move(initial);
    doc["rewards"] = mdp.rewards;
    json rows = json::array();
    for (const auto& row : mdp.transitions) {
        json entries = json::array();
        for (const auto& e : row) entries.push_back({e.state, e.prob});
        rows.push_back(std::move(entries));
    }
    doc["transitions"] = std::move(rows);
    return doc.dump(2);
}

TabularMdp mdp_from_json(const std::string& text) {
    const json doc = json::parse(text);
    require_keys(doc,
                 {"format", "num_states", "num_actions", "terminal", "initial",
                  "rewards", "transitions"},
                 "mdp document");
    if (doc.at("format").get<std::string>() != "tabular-mdp-v1")
        throw std::runtime_error("unsupported mdp format");

    TabularMdp mdp;
    mdp.num_states = doc.at("num_states").get<StateId>();
    mdp.num_actions = doc.at("num_actions").get<ActionId>();
    mdp.terminal = doc.at("terminal").get<std::vector<std::uint8_t>>();
    for (const auto& e : doc.at("initial"))
        mdp.initial_states.push_back({e.at(0).get<StateId>(), e.at(1).get<double>()});
    mdp.rewards = doc.at("rewards").get<std::vector<double>>();
    for (const auto& row : doc.at("transitions")) {
        std::vector<WeightedState> entries;
        for (const auto& e : row)
            entries.push_back({e.at(0).get<StateId>(), e.at(1).get<double>()});
        mdp.transitions.push_back(std::move(entries));
    }
    const auto problems = validate(mdp);
    if (!problems.empty())
        throw std::runtime_error("invalid mdp: " + problems.front());
    return mdp;
}

namespace {

json env_to_json(const EnvFamilyConfig& env) {
    json doc;
    doc["family"] = to_string(env.family);
    if (env.family == EnvFamily::maze) {
        doc["width"] = env.maze.width;
        doc["height"] = env.maze.height;
        doc["wall_density"] = env.maze.wall_density;
        doc["goal_x"] = env.maze.goal_x;
        doc["goal_y"] = env.maze.goal_y;
    } else {
        doc["num_actions"] = env.tmdp.num_actions;
        doc["depth"] = env.tmdp.depth;
        doc["branching"] = env.tmdp.branching;
        doc["reward_mode"] = to_string(env.tmdp.reward_mode);
        doc["dyadic_bits"] = env.tmdp.dyadic_bits;
        doc["reward_prob"] = env.tmdp.reward_prob;
    }
    return doc;
}

EnvFamilyConfig env_from_json(const json& doc) {
    EnvFamilyConfig env;
    const auto family = doc.at("family").get<std::string>();
    if (!env_family_from_string(family, env.family))
        throw std::runtime_error("unknown environment family '" + family + "'");
    if (env.family == EnvFamily::maze) {
        require_keys(doc, {"family", "width", "height", "wall_density", "goal_x", "goal_y"},
                     "maze environment");
        read_if_present(doc, "width", env.maze.width);
        read_if_present(doc, "height", env.maze.height);
        read_if_present(doc, "wall_density", env.maze.wall_density);
        read_if_present(doc, "goal_x", env.maze.goal_x);
        read_if_present(doc, "goal_y", env.maze.goal_y);
    } else {
        require_keys(doc,
                     {"family", "num_actions", "depth", "branching", "reward_mode",
                      "dyadic_bits", "reward_prob"},
                     "tree environment");
        read_if_present(doc, "num_actions", env.tmdp.num_actions);
        read_if_present(doc, "depth", env.tmdp.depth);
        read_if_present(doc, "branching", env.tmdp.branching);
        if (auto it = doc.find("reward_mode"); it != doc.end())
            env.tmdp.reward_mode = reward_mode_from(it->get<std::string>());
        read_if_present(doc, "dyadic_bits", env.tmdp.dyadic_bits);
        read_if_present(doc, "reward_prob", env.tmdp.reward_prob);
    }
    return env;
}

json agent_to_json(const AgentSpec& spec) {
    json doc;
    doc["id"] = spec.id;
    doc["algorithm"] = to_string(spec.algorithm);
    doc["q0"] = spec.q0;
    doc["prefer_novel"] = spec.prefer_novel;
    doc["alpha"] = spec.alpha;
    doc["nstep"] = spec.nstep;
    doc["lambda"] = spec.lambda;
    doc["kappa"] = spec.kappa;
    doc["model_mode"] = to_string(spec.model_mode);
    doc["backups_per_step"] = spec.backups_per_step;
    return doc;
}

AgentSpec agent_from_json(const json& doc) {
    require_keys(doc,
                 {"id", "algorithm", "q0", "prefer_novel", "alpha", "nstep", "lambda",
                  "kappa", "model_mode", "backups_per_step"},
                 "agent entry");
    AgentSpec spec;
    spec.id = doc.at("id").get<std::string>();
    const auto alg = doc.at("algorithm").get<std::string>();
    if (!algorithm_from_string(alg, spec.algorithm))
        throw std::runtime_error("unknown algorithm '" + alg + "'");
    read_if_present(doc, "q0", spec.q0);
    read_if_present(doc, "prefer_novel", spec.prefer_novel);
    read_if_present(doc, "alpha", spec.alpha);
    read_if_present(doc, "nstep", spec.nstep);
    read_if_present(doc, "lambda", spec.lambda);
    read_if_present(doc, "kappa", spec.kappa);
    if (auto it = doc.find("model_mode"); it != doc.end())
        spec.model_mode = model_mode_from(it->get<std::string>());
    read_if_present(doc, "backups_per_step", spec.backups_per_step);
    return spec;
}

}  // namespace

std::string to_json(const ExperimentConfig& config) {
    json doc;
    doc["format"] = "experiment-v1";
    doc["name"] = config.name;
    doc["env"] = env_to_json(config.env);
    json agents = json::array();
    for (const auto& spec : config.agents) agents.push_back(agent_to_json(spec));
    doc["agents"] = std::move(agents);
    doc["gamma"] = config.gamma;
    doc["epsilon"] = config.epsilon;
    doc["epsilon_style"] = to_string(config.epsilon_style);
    doc["window"] = config.window;
    doc["num_envs"] = config.num_envs;
    doc["runs_per_env"] = config.runs_per_env;
    doc["steps_per_run"] = config.steps_per_run;
    doc["episode_cap"] = config.episode_cap;
    doc["master_seed"] = config.master_seed;
    doc["out_dir"] = config.out_dir;
    return doc.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    const json doc = json::parse(text);
    require_keys(doc,
                 {"format", "name", "env", "agents", "gamma", "epsilon",
                  "epsilon_style", "window", "num_envs", "runs_per_env",
                  "steps_per_run", "episode_cap", "master_seed", "out_dir"},
                 "experiment document");
    if (doc.at("format").get<std::string>() != "experiment-v1")
        throw std::runtime_error("unsupported experiment format");

    ExperimentConfig config;
    read_if_present(doc, "name", config.name);
    config.env = env_from_json(doc.at("env"));
    for (const auto& entry : doc.at("agents"))
        config.agents.push_back(agent_from_json(entry));
    read_if_present(doc, "gamma", config.gamma);
    read_if_present(doc, "epsilon", config.epsilon);
    if (auto it = doc.find("epsilon_style"); it != doc.end())
        config.epsilon_style = epsilon_style_from(it->get<std::string>());
    read_if_present(doc, "window", config.window);
    read_if_present(doc, "num_envs", config.num_envs);
    read_if_present(doc, "runs_per_env", config.runs_per_env);
    read_if_present(doc, "steps_per_run", config.steps_per_run);
    read_if_present(doc, "episode_cap", config.episode_cap);
    read_if_present(doc, "master_seed", config.master_seed);
    read_if_present(doc, "out_dir", config.out_dir);

    const auto problems = validate(config);
    if (!problems.empty())
        throw std::runtime_error("invalid config: " + problems.front());
    return config;
}

std::string load_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace tabrl
