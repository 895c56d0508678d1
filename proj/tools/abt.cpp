// abt — compile dialogue-game strategies from five source languages and
// run them on the GAM/VAM/SAM/EAM family of abstract machines.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "abt/equivalence.hpp"
#include "abt/extensions/fax.hpp"
#include "abt/extensions/strong.hpp"
#include "abt/frontends/cbv.hpp"
#include "abt/frontends/classical.hpp"
#include "abt/frontends/lambda.hpp"
#include "abt/frontends/ludics.hpp"
#include "abt/frontends/pcf.hpp"
#include "abt/machines/eam.hpp"
#include "abt/machines/gam.hpp"
#include "abt/machines/sam.hpp"
#include "abt/machines/vam.hpp"
#include "abt/text.hpp"

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw abt::AbtError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct Loaded {
  abt::Rooted phi;
  abt::CounterStrategy psi;
  abt::EamProgram eam;
  bool has_eam = false;
};

Loaded load(const std::string& frontend, const std::string& path,
            bool eta, bool star) {
  std::string text = slurp(path);
  Loaded out;
  if (frontend == "lambda") {
    auto p = abt::lam::parse(text);
    auto mode = star ? abt::lam::Mode::star
                     : (eta ? abt::lam::Mode::bohm_eta : abt::lam::Mode::bohm);
    auto c = abt::lam::compile_program(p, mode);
    out = {c.phi, c.psi, c.eam, true};
  } else if (frontend == "pcf") {
    auto c = abt::pcf::compile_program(abt::pcf::parse(text), eta);
    out = {c.phi, c.psi, c.eam, true};
  } else if (frontend == "pcf-mu") {
    auto c = abt::mu::compile_program(abt::mu::parse(text));
    out = {c.phi, c.psi, c.eam, true};
  } else if (frontend == "cbv") {
    auto p = abt::cbv::parse(text);
    abt::cbv::typecheck_program(p);
    auto c = abt::cbv::compile_program(p);
    out = {c.phi, c.psi, c.eam, true};
  } else if (frontend == "ludics") {
    auto c = abt::lud::compile_program(abt::lud::parse(text));
    out = {c.phi, c.psi, c.eam, true};
  } else if (frontend == "abt") {
    auto p = abt::parse_program(text);
    out.phi = p.phi;
    out.psi = p.psi;
    out.eam.main = abt::decompile(out.phi, "x");
    char c = 'a';
    for (auto& [name, r] : out.psi.entries)
      out.eam.entries[name] =
          abt::decompile(r, std::string(1, c++) + "e");
    out.has_eam = true;
  } else {
    throw abt::AbtError("unknown frontend " + frontend);
  }
  if (star && frontend != "lambda")
    throw abt::AbtError("--star needs the lambda frontend");
  if (star && !out.psi.entries.empty())
    throw abt::AbtError("--star excludes a separate counter-strategy");
  if (eta && frontend != "lambda" && frontend != "pcf" && frontend != "abt")
    throw abt::AbtError("--eta needs an arity-annotated frontend");
  return out;
}

json trace_json(const abt::GamRun& run, const std::string& machine) {
  json steps = json::array();
  for (const auto& it : run.items) {
    const abt::Seat* last = it.pos.get();
    json rec{{"step", it.stage.n},
             {"phase", it.stage.star ? "star" : "plain"},
             {"machine", machine},
             {"rule", it.rule},
             {"move", last->move.str()},
             {"pointer", last->player ? last->ptr.str() : ""},
             {"position", abt::pos_str(it.pos)}};
    if (last->player)
      rec["stamp"] = nullptr;
    else
      rec["stamp"] = last->stamp;
    steps.push_back(std::move(rec));
  }
  return json{{"machine", machine},
              {"steps", std::move(steps)},
              {"termination", run.term.str()},
              {"exit", run.term.exit_code()}};
}

int run_machine(const Loaded& in, const std::string& machine, bool eta,
                bool star, long fuel, const std::string& format) {
  abt::Termination term = abt::Termination::fuel({});
  abt::GamRun gam_view;  // ledger used for rendering when available
  bool have_ledger = false;

  if (machine == "gam") {
    if (eta) {
      auto r = abt::gam_eta_run(in.phi, in.psi, fuel);
      gam_view = r.run;
      term = r.run.term;
      have_ledger = true;
      if (format == "text") std::cout << r.expanded;
    } else {
      abt::Arena arena(in.phi, in.psi);
      abt::GamOptions opts;
      opts.fuel = fuel;
      opts.star = star;
      gam_view = abt::gam_run(arena, opts);
      term = gam_view.term;
      have_ledger = true;
    }
  } else if (machine == "vam") {
    abt::Arena arena(in.phi, in.psi, eta ? abt::EtaMode::on : abt::EtaMode::off);
    abt::VamOptions opts;
    opts.fuel = fuel;
    opts.star = star;
    auto r = abt::vam_run(arena, opts);
    term = r.term;
    gam_view.items = abt::vam_to_gam(r.state).items;
    gam_view.term = term;
    have_ledger = true;
  } else if (machine == "sam") {
    abt::Arena arena(in.phi, in.psi, eta ? abt::EtaMode::on : abt::EtaMode::off);
    abt::SamOptions opts;
    opts.fuel = fuel;
    opts.star = star;
    auto r = abt::sam_run(arena, opts);
    term = r.term;
    if (!r.steps.empty()) {
      gam_view.items = abt::sam_to_gam(r.steps.back().state).items;
      gam_view.term = term;
      have_ledger = true;
    }
  } else if (machine == "eam") {
    if (!in.has_eam) throw abt::AbtError("no concrete program for the EAM");
    abt::EamOptions opts;
    opts.fuel = fuel;
    opts.star = star;
    auto r = abt::eam_run(in.eam, opts);
    term = r.term;
    if (format == "text") {
      for (std::size_t k = 0; k < r.states.size(); ++k)
        std::cout << (k + 1) << "  [" << r.states[k].code->head.str()
                  << "]\n";
    }
  } else {
    throw abt::AbtError("unknown machine " + machine);
  }

  if (format == "json") {
    std::cout << trace_json(have_ledger ? gam_view
                                        : abt::GamRun{{}, term},
                            machine)
                     .dump(2)
              << "\n";
  } else {
    if (have_ledger) {
      std::cout << abt::render_trace(gam_view);
      std::cout << abt::render_mtrees(abt::build_mtrees(gam_view.items));
    } else {
      std::cout << "halt: " << term.str() << "\n";
    }
  }
  return term.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abstract Böhm trees and their dialogue-game machines"};
  app.require_subcommand(1);

  std::string frontend = "lambda", file, machine = "gam",
              format = "text", driver = "exhaustive:4";
  bool eta = false, star = false;
  long fuel = 100000;

  auto add_common = [&](CLI::App* cmd, bool with_machine) {
    cmd->add_option("--frontend", frontend,
                    "lambda|pcf|pcf-mu|cbv|ludics|abt");
    cmd->add_flag("--eta", eta, "dynamic η-expansion (GAM_η)");
    cmd->add_flag("--star", star, "GAM* indirection for non-normal forms");
    cmd->add_option("--max-steps", fuel, "fuel");
    cmd->add_option("--format", format, "text|json");
    if (with_machine)
      cmd->add_option("--machine", machine, "gam|vam|sam|eam");
    cmd->add_option("file", file, "input program")->required();
  };

  auto* ccompile = app.add_subcommand("compile", "compile to a strategy");
  add_common(ccompile, false);

  auto* crun = app.add_subcommand("run", "run a machine");
  add_common(crun, true);

  auto* ccompose =
      app.add_subcommand("compose", "strong reduction and readback");
  add_common(ccompose, false);
  ccompose->add_option("--driver", driver,
                       "script:<file> | interactive | exhaustive:<depth>");

  auto* cequiv = app.add_subcommand("equiv", "machine-equivalence report");
  std::uint64_t seed = 1;
  int cases = 0;
  std::vector<std::string> equiv_files;
  cequiv->add_option("--seed", seed, "campaign seed");
  cequiv->add_option("--cases", cases, "number of random cases");
  cequiv->add_option("--max-steps", fuel, "fuel");
  cequiv->add_option("--frontend", frontend, "frontend for files");
  cequiv->add_option("files", equiv_files, "programs to check");

  auto* cfix = app.add_subcommand("fixtures", "list bundled paper fixtures");
  std::string fixdir = "fixtures";
  cfix->add_option("--dir", fixdir, "fixtures directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ccompile->parsed()) {
      Loaded in = load(frontend, file, eta, star);
      std::cout << abt::strategy_str(in.phi) << "\n";
      if (!in.psi.entries.empty() || in.psi.gen)
        std::cout << abt::counter_str(in.psi) << "\n";
      return 0;
    }
    if (crun->parsed()) {
      if (eta && machine == "eam")
        throw abt::AbtError("the EAM has no η rules");
      Loaded in = load(frontend, file, eta, star);
      return run_machine(in, machine, eta, star, fuel, format);
    }
    if (ccompose->parsed()) {
      if (star) throw abt::AbtError("compose does not support --star");
      Loaded in = load(frontend, file, eta, star);
      abt::StrongRun run;
      if (driver.rfind("exhaustive:", 0) == 0) {
        int depth = std::stoi(driver.substr(11));
        abt::StrongOptions opts;
        opts.fuel = fuel;
        run = abt::strong_run_exhaustive(in.phi, in.psi, depth, opts);
      } else if (driver.rfind("script:", 0) == 0) {
        std::istringstream in_s(slurp(driver.substr(7)));
        abt::ScriptPilot pilot;
        std::string tok;
        while (in_s >> tok) pilot.script.push_back(abt::Move::parse(tok));
        pilot.strict = !eta;
        abt::StrongOptions opts;
        opts.fuel = fuel;
        abt::Arena arena(in.phi, in.psi,
                         eta ? abt::EtaMode::on : abt::EtaMode::off);
        run = abt::strong_run(arena, pilot, opts);
      } else if (driver == "interactive") {
        abt::CallbackPilot pilot;
        pilot.fn = [](const abt::Composite& focus,
                      const std::vector<abt::Move>& available)
            -> std::optional<abt::Move> {
          std::cout << "response: " << abt::composite_str(focus) << "\n";
          std::cout << "raise (";
          for (std::size_t i = 0; i < available.size(); ++i)
            std::cout << (i ? " " : "") << available[i].str();
          std::cout << ") or end: " << std::flush;
          std::string tok;
          if (!(std::cin >> tok) || tok == "end") return std::nullopt;
          return abt::Move::parse(tok);
        };
        abt::StrongOptions opts;
        opts.fuel = fuel;
        abt::Arena arena(in.phi, in.psi,
                         eta ? abt::EtaMode::on : abt::EtaMode::off);
        run = abt::strong_run(arena, pilot, opts);
      } else {
        throw abt::AbtError("unknown driver " + driver);
      }
      for (const auto& r : run.responses)
        std::cout << abt::composite_str(r) << "\n";
      if (!run.responses.empty())
        std::cout << "readback: "
                  << abt::strategy_str(
                         abt::readback_composition(run.responses))
                  << "\n";
      if (run.end == abt::StrongRun::End::illegal) {
        std::cerr << run.note << "\n";
        return 4;
      }
      return 0;
    }
    if (cequiv->parsed()) {
      json out;
      out["cases"] = json::array();
      bool all_ok = true;
      auto add_case = [&](const abt::CaseReport& rep) {
        json divs = json::array();
        for (const auto& d : rep.divergences)
          divs.push_back(json{{"stage", d.stage.str()},
                              {"where", d.where},
                              {"detail", d.detail}});
        out["cases"].push_back(json{{"name", rep.name},
                                    {"seed", rep.seed},
                                    {"stages", rep.stages},
                                    {"halt", rep.halt_stage.str()},
                                    {"divergences", std::move(divs)}});
        all_ok = all_ok && rep.ok();
      };
      for (const auto& f : equiv_files) {
        Loaded in = load(frontend, f, false, false);
        abt::LockstepOptions opts;
        opts.fuel = fuel;
        add_case(abt::check_lockstep(f, in.phi, in.psi, in.eam, opts));
      }
      if (cases > 0) {
        abt::LockstepOptions opts;
        opts.fuel = fuel;
        for (const auto& rep :
             abt::run_campaign(seed, cases, {}, opts).cases)
          add_case(rep);
      }
      out["ok"] = all_ok;
      std::cout << out.dump(2) << "\n";
      return all_ok ? 0 : 1;
    }
    if (cfix->parsed()) {
      for (const auto& name :
           {"bohm_double_call.lam", "pcf_case.pcf", "mu_chain.pcfmu",
            "cbv_main.cbv", "cbv_addition.cbv", "cbv_apply.cbv",
            "ludics_m1.lud", "ludics_m2.lud", "compose_ex1.lam",
            "compose_ex2.lam", "static_binding.lam", "delta_delta.lam",
            "eta_preamble.abt", "fax.abt", "separation_y.lam",
            "separation_xy.lam"})
        std::cout << fixdir << "/" << name << "\n";
      return 0;
    }
  } catch (const abt::AbtError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  }
  return 0;
}
