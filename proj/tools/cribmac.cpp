// Batch experiment front end: reads a JSON config, dispatches to the
// computation modules, writes plot-ready CSV / JSON. Every output embeds the
// hash of the effective config, and all randomness flows from the single
// config seed, so reruns are byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cribmac/block_markov.hpp"
#include "cribmac/io.hpp"
#include "cribmac/regions.hpp"
#include "cribmac/resolvability.hpp"
#include "cribmac/rng.hpp"
#include "cribmac/secrecy.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hash_hex(const std::string& s) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(cribmac::fnv1a64(s)));
    return buf;
}

struct Ctx {
    json cfg;
    std::string cfg_hash;
    fs::path out_dir;
    fs::path cfg_dir;  // config-relative paths resolve against this
};

json require(const json& cfg, const char* key) {
    if (!cfg.contains(key)) throw cribmac::Error(std::string("config: missing \"") + key + "\"");
    return cfg[key];
}

fs::path resolve(const Ctx& ctx, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : ctx.cfg_dir / path;
}

cribmac::InputLaw law_from_config(const Ctx& ctx) {
    if (ctx.cfg.contains("law")) return cribmac::law_from_json(ctx.cfg["law"]);
    if (ctx.cfg.contains("law_file"))
        return cribmac::law_from_json(
            cribmac::load_json_file(resolve(ctx, ctx.cfg["law_file"].get<std::string>())));
    throw cribmac::Error("config: missing \"law\" or \"law_file\"");
}

std::optional<cribmac::TargetOutput> target_from_config(const Ctx& ctx) {
    if (!ctx.cfg.contains("target")) return std::nullopt;
    std::vector<double> q = ctx.cfg["target"].get<std::vector<double>>();
    return cribmac::TargetOutput{cribmac::ProbVector(std::move(q))};
}

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cribmac::Error("cannot write " + path.string());
    out << body;
}

json constraints_json(const cribmac::RegionSpec& spec) {
    json arr = json::array();
    for (const auto& c : spec.constraints)
        arr.push_back(json{{"name", c.name},
                           {"a1", c.a1},
                           {"a2", c.a2},
                           {"sense", c.sense == cribmac::Sense::AtLeast ? ">=" : "<="},
                           {"bound", c.bound}});
    return arr;
}

// ---- region ----------------------------------------------------------------

void cmd_region(const Ctx& ctx) {
    json channel_json =
        cribmac::load_json_file(resolve(ctx, require(ctx.cfg, "channel").get<std::string>()));
    auto scenario =
        cribmac::scenario_from_string(require(ctx.cfg, "scenario").get<std::string>());

    cribmac::DistributionSearchConfig search;
    std::string mode = ctx.cfg.value("mode", "induced");
    search.mode = mode == "target" ? cribmac::DistributionSearchConfig::Mode::TargetQ
                                   : cribmac::DistributionSearchConfig::Mode::InducedQ;
    search.grid_resolution = ctx.cfg.value("grid_resolution", std::size_t{8});
    search.samples = ctx.cfg.value("samples", std::size_t{64});
    search.u_cardinality_cap = ctx.cfg.value("u_cap", std::size_t{0});
    search.target_tol = ctx.cfg.value("target_tol", 1e-9);
    search.seed = require(ctx.cfg, "seed").get<std::uint64_t>();

    auto target = target_from_config(ctx);
    cribmac::UnionRegionResult result =
        cribmac::is_wiretap_json(channel_json)
            ? cribmac::union_region_estimate(cribmac::wiretap_mac_from_json(channel_json),
                                             scenario, target, search)
            : cribmac::union_region_estimate(cribmac::mac_channel_from_json(channel_json),
                                             scenario, target, search);

    std::string csv = "# config_hash=" + ctx.cfg_hash + "\nr1,r2,law_id\n";
    for (const auto& fp : result.frontier)
        csv += fmt(fp.point.r1) + "," + fmt(fp.point.r2) + "," + std::to_string(fp.law_id) + "\n";
    write_text(ctx.out_dir / "frontier.csv", csv);

    json laws = json::array();
    for (std::size_t i = 0; i < result.laws.size(); ++i) {
        json induced = json::array();
        for (double x : result.induced[i]) induced.push_back(x);
        json entry{{"id", i},
                   {"law", cribmac::to_json(result.laws[i])},
                   {"induced_q", std::move(induced)},
                   {"feasible", result.specs[i].feasible},
                   {"constraints", constraints_json(result.specs[i])}};
        if (result.specs[i].feasibility_margin)
            entry["feasibility_margin"] = *result.specs[i].feasibility_margin;
        laws.push_back(std::move(entry));
    }
    json frontier_json = json::array();
    for (const auto& fp : result.frontier)
        frontier_json.push_back(
            json{{"r1", fp.point.r1}, {"r2", fp.point.r2}, {"law_id", fp.law_id}});
    json doc{{"config_hash", ctx.cfg_hash},
             {"scenario", cribmac::to_string(scenario)},
             {"laws", std::move(laws)},
             {"frontier", std::move(frontier_json)}};
    write_text(ctx.out_dir / "laws.json", doc.dump(2) + "\n");
}

// ---- simulate ---------------------------------------------------------------

void cmd_simulate(const Ctx& ctx) {
    cribmac::MacChannel mac = cribmac::mac_channel_from_json(
        cribmac::load_json_file(resolve(ctx, require(ctx.cfg, "channel").get<std::string>())));
    auto scenario =
        cribmac::scenario_from_string(require(ctx.cfg, "scenario").get<std::string>());
    cribmac::InputLaw law = law_from_config(ctx);
    std::vector<double> rates = require(ctx.cfg, "rates").get<std::vector<double>>();
    if (rates.size() != 2) throw cribmac::Error("config: rates must be [r1, r2]");
    std::vector<std::size_t> n_list = require(ctx.cfg, "n_list").get<std::vector<std::size_t>>();
    std::size_t trials = require(ctx.cfg, "trials").get<std::size_t>();
    std::uint64_t seed = require(ctx.cfg, "seed").get<std::uint64_t>();

    auto target_opt = target_from_config(ctx);
    cribmac::TargetOutput target =
        target_opt ? *target_opt : cribmac::TargetOutput{cribmac::induced_output(mac, law)};

    std::vector<cribmac::SimReport> reports;
    for (std::size_t n : n_list) {
        cribmac::CodebookConfig cc{scenario, n, rates[0], rates[1], law,
                                   cribmac::derive_seed(seed, "sweep/n", {n})};
        reports.push_back(cribmac::mc_expected_kl(cc, mac, target, trials));
    }

    std::string decay = "# config_hash=" + ctx.cfg_hash +
                        "\nn,r1,r2,trials,mean_kl_bits,stderr_bits,realized_r1,realized_r2\n";
    std::string per_trial = "# config_hash=" + ctx.cfg_hash + "\ntrial,n,r1,r2,kl_bits\n";
    json report_json = json::array();
    for (const auto& rep : reports) {
        decay += std::to_string(rep.n) + "," + fmt(rep.nominal_r1) + "," + fmt(rep.nominal_r2) +
                 "," + std::to_string(rep.kl_per_trial.size()) + "," + fmt(rep.mean) + "," +
                 fmt(rep.stderr_mean) + "," + fmt(rep.realized_r1) + "," + fmt(rep.realized_r2) +
                 "\n";
        for (std::size_t t = 0; t < rep.kl_per_trial.size(); ++t)
            per_trial += std::to_string(t) + "," + std::to_string(rep.n) + "," +
                         fmt(rep.nominal_r1) + "," + fmt(rep.nominal_r2) + "," +
                         fmt(rep.kl_per_trial[t]) + "\n";
        report_json.push_back(json{{"n", rep.n},
                                   {"scenario", cribmac::to_string(rep.scenario)},
                                   {"nominal_rates", {rep.nominal_r1, rep.nominal_r2}},
                                   {"realized_rates", {rep.realized_r1, rep.realized_r2}},
                                   {"message_counts", {rep.m1_count, rep.m2_count}},
                                   {"trials", rep.kl_per_trial.size()},
                                   {"mean_kl_bits", rep.mean},
                                   {"stderr_bits", rep.stderr_mean}});
    }
    write_text(ctx.out_dir / "decay.csv", decay);
    write_text(ctx.out_dir / "trials.csv", per_trial);
    json doc{{"config_hash", ctx.cfg_hash}, {"reports", std::move(report_json)}};
    write_text(ctx.out_dir / "report.json", doc.dump(2) + "\n");
}

// ---- secrecy ----------------------------------------------------------------

void cmd_secrecy(const Ctx& ctx) {
    cribmac::WiretapMac wmac = cribmac::wiretap_mac_from_json(
        cribmac::load_json_file(resolve(ctx, require(ctx.cfg, "channel").get<std::string>())));
    auto scenario =
        cribmac::scenario_from_string(require(ctx.cfg, "scenario").get<std::string>());

    cribmac::SecrecyCodeConfig sc;
    sc.scenario = scenario;
    sc.law = law_from_config(ctx);
    sc.seed = require(ctx.cfg, "seed").get<std::uint64_t>();
    sc.typ_epsilon = ctx.cfg.value("typ_epsilon", 0.2);

    std::vector<double> secret = require(ctx.cfg, "secret_rates").get<std::vector<double>>();
    if (secret.size() != 2) throw cribmac::Error("config: secret_rates must be [r1, r2]");
    sc.secret_r1 = secret[0];
    sc.secret_r2 = secret[1];

    std::vector<std::size_t> n_list;
    if (scenario == cribmac::CribbingScenario::StrictlyCausal) {
        sc.r = require(ctx.cfg, "r").get<std::size_t>();
        sc.B = require(ctx.cfg, "B").get<std::size_t>();
        std::vector<double> rho = require(ctx.cfg, "rho").get<std::vector<double>>();
        if (rho.size() != 3) throw cribmac::Error("config: rho must be [rho1p, rho1pp, rho2]");
        sc.rho1p = rho[0];
        sc.rho1pp = rho[1];
        sc.rho2 = rho[2];
        n_list = {sc.r * sc.B};
    } else {
        std::vector<double> dither = require(ctx.cfg, "dither_rates").get<std::vector<double>>();
        if (dither.size() != 2) throw cribmac::Error("config: dither_rates must be [r1p, r2p]");
        sc.dither_r1 = dither[0];
        sc.dither_r2 = dither[1];
        n_list = ctx.cfg.contains("n_list")
                     ? ctx.cfg["n_list"].get<std::vector<std::size_t>>()
                     : std::vector<std::size_t>{require(ctx.cfg, "n").get<std::size_t>()};
    }

    json reports = json::array();
    std::string csv = "# config_hash=" + ctx.cfg_hash +
                      "\nn,r1,r2,r1p,r2p,p_error,leakage_bits,resolvability_bound_bits\n";
    for (std::size_t n : n_list) {
        cribmac::SecrecyCodeConfig run = sc;
        run.n = n;
        run.seed = cribmac::derive_seed(sc.seed, "secrecy/n", {n});
        cribmac::SecrecyReport rep = cribmac::simulate_secrecy(run, wmac);
        json entry{{"n", rep.n},
                   {"scenario", cribmac::to_string(rep.scenario)},
                   {"p_error", rep.p_error},
                   {"leakage_bits", rep.leakage_bits},
                   {"resolvability_bound_bits", rep.resolvability_bound_bits},
                   {"message_entropy_bits", rep.message_entropy_bits}};
        if (scenario == cribmac::CribbingScenario::StrictlyCausal)
            entry["coupling_gap_bound"] = rep.coupling_gap_bound;
        reports.push_back(std::move(entry));
        csv += std::to_string(rep.n) + "," + fmt(sc.secret_r1) + "," + fmt(sc.secret_r2) + "," +
               fmt(sc.dither_r1) + "," + fmt(sc.dither_r2) + "," + fmt(rep.p_error) + "," +
               fmt(rep.leakage_bits) + "," + fmt(rep.resolvability_bound_bits) + "\n";
    }
    json doc{{"config_hash", ctx.cfg_hash}, {"reports", std::move(reports)}};
    write_text(ctx.out_dir / "report.json", doc.dump(2) + "\n");
    write_text(ctx.out_dir / "sweep.csv", csv);
}

// ---- chain ------------------------------------------------------------------

void cmd_chain(const Ctx& ctx) {
    cribmac::MacChannel mac = cribmac::mac_channel_from_json(
        cribmac::load_json_file(resolve(ctx, require(ctx.cfg, "channel").get<std::string>())));
    cribmac::BlockConfig bc;
    bc.law = law_from_config(ctx);
    bc.r = require(ctx.cfg, "r").get<std::size_t>();
    bc.B = require(ctx.cfg, "B").get<std::size_t>();
    bc.seed = require(ctx.cfg, "seed").get<std::uint64_t>();
    bc.decode_epsilon = ctx.cfg.value("decode_epsilon", 0.2);
    bc.estimate_coupling = ctx.cfg.value("estimate_coupling", true);

    cribmac::JointTable joint = cribmac::full_joint(mac, bc.law);
    if (ctx.cfg.contains("rho")) {
        std::vector<double> rho = ctx.cfg["rho"].get<std::vector<double>>();
        if (rho.size() != 4) throw cribmac::Error("config: rho must be [rho0,rho1,rho2,rho3]");
        bc.alloc = {rho[0], rho[1], rho[2], rho[3], ctx.cfg.value("gamma", 1.0),
                    ctx.cfg.value("epsilon", 0.05)};
    } else {
        bc.alloc = cribmac::default_allocation(joint, ctx.cfg.value("epsilon", 0.05),
                                               ctx.cfg.value("gamma", 1.0));
    }

    cribmac::RatePoint eff = cribmac::effective_rates(bc.alloc);

    // sampling fallback for chains whose exact state space is out of reach
    if (ctx.cfg.contains("trajectories")) {
        auto trajectories = ctx.cfg["trajectories"].get<std::size_t>();
        cribmac::ChainSampleEstimate est =
            cribmac::simulate_chain_mc(bc, mac, target_from_config(ctx), trajectories);
        json doc{{"config_hash", ctx.cfg_hash},
                 {"estimated_by_sampling", true},
                 {"trajectories", est.trajectories},
                 {"rho", {bc.alloc.rho0, bc.alloc.rho1, bc.alloc.rho2, bc.alloc.rho3}},
                 {"gamma", bc.alloc.gamma},
                 {"effective_rates", {eff.r1, eff.r2}},
                 {"per_block_kl_bits_plugin", est.per_block_kl_plugin},
                 {"p_error", est.p_error},
                 {"mismatch", est.mismatch},
                 {"recycle_ledger",
                  {{"w0", est.plan.w0},
                   {"w1", est.plan.w1},
                   {"w2", est.plan.w2},
                   {"fresh1", est.plan.fresh1},
                   {"fresh2", est.plan.fresh2},
                   {"residue0", est.plan.residue0},
                   {"residue1", est.plan.residue1},
                   {"residue2", est.plan.residue2}}}};
        write_text(ctx.out_dir / "chain.json", doc.dump(2) + "\n");
        return;
    }

    cribmac::ChainResult res = cribmac::simulate_chain(bc, mac, target_from_config(ctx));

    auto diag_json = [](const cribmac::ChainDiagnostics& d) {
        return json{{"total_kl_bits", d.total_kl},
                    {"per_block_kl_bits", d.per_block_kl},
                    {"cross_block_mi_bits", d.cross_mi},
                    {"decomposition_gap", d.eq_decomposition_gap},
                    {"secrecy_kl_bits", d.secrecy_kl},
                    {"markov_lhs_bits", d.markov_lhs},
                    {"markov_rhs_bits", d.markov_rhs},
                    {"p_error", d.p_error},
                    {"mismatch", d.mismatch},
                    {"v_gap", d.v_gap}};
    };
    json doc{{"config_hash", ctx.cfg_hash},
             {"rho", {bc.alloc.rho0, bc.alloc.rho1, bc.alloc.rho2, bc.alloc.rho3}},
             {"gamma", bc.alloc.gamma},
             {"epsilon", bc.alloc.epsilon},
             {"effective_rates", {eff.r1, eff.r2}},
             {"index_spaces", {res.n0, res.n1, res.n2, res.n3}},
             {"recycle_ledger",
              {{"w0", res.plan.w0},
               {"w1", res.plan.w1},
               {"w2", res.plan.w2},
               {"fresh1", res.plan.fresh1},
               {"fresh2", res.plan.fresh2},
               {"residue0", res.plan.residue0},
               {"residue1", res.plan.residue1},
               {"residue2", res.plan.residue2}}},
             {"ideal", diag_json(res.ideal)}};
    if (res.estimated) doc["estimated"] = diag_json(*res.estimated);
    write_text(ctx.out_dir / "chain.json", doc.dump(2) + "\n");
}

std::string error_type_name(const std::exception& e) {
    if (dynamic_cast<const cribmac::AbsoluteContinuityViolation*>(&e))
        return "AbsoluteContinuityViolation";
    if (dynamic_cast<const cribmac::AxisError*>(&e)) return "AxisError";
    if (dynamic_cast<const cribmac::LengthMismatch*>(&e)) return "LengthMismatch";
    if (dynamic_cast<const cribmac::DimensionMismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const cribmac::LawVariantError*>(&e)) return "LawVariantError";
    if (dynamic_cast<const cribmac::TargetMismatch*>(&e)) return "TargetMismatch";
    if (dynamic_cast<const cribmac::GuardExceeded*>(&e)) return "GuardExceeded";
    if (dynamic_cast<const cribmac::NoFeasibleLaw*>(&e)) return "NoFeasibleLaw";
    if (dynamic_cast<const cribmac::InfeasibleLaw*>(&e)) return "InfeasibleLaw";
    if (dynamic_cast<const cribmac::ZeroMarginal*>(&e)) return "ZeroMarginal";
    if (dynamic_cast<const cribmac::Error*>(&e)) return "Error";
    return "Exception";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cribbing-MAC resolvability and secrecy laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    for (const char* name : {"region", "simulate", "secrecy", "chain"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config JSON")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "override the config seed");
    }

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    try {
        Ctx ctx;
        ctx.cfg = cribmac::load_json_file(config_path);
        if (!ctx.cfg.contains("schema_version") || ctx.cfg["schema_version"].get<int>() != 1)
            throw cribmac::Error("config: schema_version 1 required");
        if (ctx.cfg.contains("command") &&
            ctx.cfg["command"].get<std::string>() != command)
            throw cribmac::Error("config: command field disagrees with the subcommand");
        if (seed_override) ctx.cfg["seed"] = *seed_override;
        ctx.cfg_hash = hash_hex(ctx.cfg.dump());
        ctx.cfg_dir = fs::path(config_path).parent_path();
        ctx.out_dir = out_dir;
        fs::create_directories(ctx.out_dir);

        if (command == "region") cmd_region(ctx);
        else if (command == "simulate") cmd_simulate(ctx);
        else if (command == "secrecy") cmd_secrecy(ctx);
        else cmd_chain(ctx);
    } catch (const std::exception& e) {
        json err{{"error", {{"type", error_type_name(e)}, {"message", e.what()}}}};
        std::cout << err.dump() << "\n";
        return 1;
    }
    return 0;
}
