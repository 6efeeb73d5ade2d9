// Runs the pipeline on the default configuration (or --config) and prints one line per criterion.
#include <cstdio>
#include <string>

#include "ws/pipeline.hpp"

int main(int argc, char** argv) {
  std::string config, out = "acceptance_run";
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string a = argv[i];
    if (a == "--config") config = argv[i + 1];
    else if (a == "--out") out = argv[i + 1];
    else {
      std::fprintf(stderr, "usage: acceptance [--config PATH] [--out DIR]\n");
      return 1;
    }
  }
  try {
    ws::RunConfig cfg = config.empty() ? ws::RunConfig::defaults() : ws::load_config(config);
    cfg.stage = ws::Stage::full;
    cfg.out_dir = out;
    ws::RunReport r = ws::run_pipeline(cfg);
    ws::emit_report(r, out);
    int fails = 0;
    for (const auto& v : r.verdicts) {
      std::string s = v.status;
      for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      std::printf("criterion %d %-22s %-14s %s\n", v.id, v.name.c_str(), s.c_str(), v.detail.c_str());
      fails += v.status == "fail";
    }
    std::printf("%d of 8 criteria failed; report in %s\n", fails, out.c_str());
    return fails ? 2 : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
