#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "escat/app.hpp"
#include "escat/config.hpp"
#include "escat/errors.hpp"

namespace {

struct SubOptions {
  CLI::App* sub = nullptr;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::vector<std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"radiation from a single laser-driven electron"};
  cli.set_version_flag("--version", "escat 0.1.0");
  cli.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"trajectory", "integrate the electron motion and dump it as CSV"},
      {"radiate", "angular-spectral radiation map of a single electron"},
      {"thomson-scan", "coherent emission of a rigid charge cloud versus its radius"},
      {"wigner", "phase-space density, spreading curve, and negativity report"},
      {"ensemble", "Monte Carlo radiation of a sampled wave packet"},
      {"compare", "coherent versus incoherent emission of a spread packet"},
  };

  std::vector<SubOptions> subs(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    SubOptions& s = subs[i];
    s.sub = cli.add_subcommand(commands[i].first, commands[i].second);
    s.sub->add_option("config", s.config_path, "INI configuration file");
    s.sub->add_option("--out", s.out_dir, "output directory (overrides [output] directory)");
    s.sub->add_option("--seed", s.seed, "Monte Carlo seed (overrides [ensemble] seed)");
    s.sub->add_option("--threads", s.threads, "worker thread count (default: all cores)");
    s.sub->add_option("--set", s.overrides, "override one key, as section.key=value")
        ->type_size(1)
        ->allow_extra_args(false);
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const SubOptions* chosen = nullptr;
    std::string name;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i].sub->parsed()) {
        chosen = &subs[i];
        name = commands[i].first;
      }
    }

    escat::RunContext ctx;
    ctx.subcommand = name;
    ctx.config = chosen->config_path.empty() ? escat::parse_config_text("")
                                             : escat::parse_config_file(chosen->config_path);
    for (const std::string& spec : chosen->overrides) {
      escat::apply_override(ctx.config, spec);
    }
    if (chosen->sub->count("--seed") > 0) {
      ctx.config.seed = chosen->seed;
      ctx.config.seed_set = true;
    }
    ctx.out_dir = chosen->out_dir.empty() ? ctx.config.directory : chosen->out_dir;
    ctx.threads = chosen->sub->count("--threads") > 0
                      ? std::max<std::size_t>(1, chosen->threads)
                      : std::max(1u, std::thread::hardware_concurrency());

    escat::run_subcommand(ctx);
    std::printf("escat %s: outputs in %s\n", name.c_str(), ctx.out_dir.c_str());
    return 0;
  } catch (const escat::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const escat::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
