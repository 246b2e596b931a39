// Black-box checks of the omitlab command-line tool: exit codes, the files a
// run leaves behind, and byte-level determinism. Takes the binary path as its
// only argument and exits with the number of failed checks.

#include <omitlab/io.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using omitlab::io::json;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "[ ok ]" : "[FAIL]", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse(const fs::path& f) { return json::parse(slurp(f)); }

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_checks <path-to-omitlab>\n");
        return 64;
    }
    const std::string cli = argv[1];
    const fs::path work = fs::temp_directory_path() / "omitlab_cli_checks";
    fs::remove_all(work);
    fs::create_directories(work);
    const auto out = [&](const char* leaf) { return (work / leaf).string(); };

    // --- success paths -----------------------------------------------------
    check(run(cli + " steady --preset paper-single --out " + out("steady")) == 0,
          "steady exits 0");
    {
        const json j = parse(work / "steady" / "steady.json");
        check(j.contains("x_s") && j.contains("stability_eigs") && j.contains("stable"),
              "steady.json carries the operating point");
        const json m = parse(work / "steady" / "manifest.json");
        check(m.at("seedless_deterministic") == true &&
                  m.at("command").get<std::string>().find("steady") != std::string::npos,
              "manifest records the command and determinism promise");
    }

    check(run(cli + " spectrum --preset paper-single --points 61 --out " + out("sp")) == 0,
          "spectrum exits 0");
    {
        const std::string csv = slurp(work / "sp" / "spectrum.csv");
        check(csv.rfind("swept,t_p2,eta,arg_tp,arg_A2,stable\n", 0) == 0,
              "spectrum.csv has the documented header");
        const json meta = parse(work / "sp" / "spectrum_meta.json");
        check(meta.at("points") == 61 && meta.at("params").at("topology") == "single",
              "spectrum meta sidecar describes the sweep");
    }

    check(run(cli + " delay --preset paper-single --out " + out("delay")) == 0,
          "delay exits 0");
    check(parse(work / "delay" / "delay.json").at("converged") == true,
          "delay converged at the preset");

    // --- configuration errors (exit 2) -------------------------------------
    check(run(cli + " spectrum --preset paper-single --probe-ratio 0 --out " +
              out("e1")) == 2,
          "a probeless spectrum is a configuration error");
    check(run(cli + " spectrum --preset nonsense --out " + out("e2")) == 2,
          "unknown preset is a configuration error");
    check(run(cli + " figure Fig9 --out " + out("e3")) == 2,
          "unknown figure name is a configuration error");
    check(run(cli + " gain-sweep --preset paper-single --out " + out("e4")) == 2,
          "gain sweep on the single topology is a configuration error");
    {
        std::ofstream(work / "bad.json") << "{\"kapa\": 1.0}";
        check(run(cli + " steady --config " + (work / "bad.json").string() +
                  " --out " + out("e5")) == 2,
              "unknown config key is a configuration error");
    }

    // --- singular grid points (exit 3, files still written) -----------------
    check(run(cli + " gain-sweep --preset paper-double --points 9 --out " +
              out("gain")) == 3,
          "gain sweep spanning the dark point reports the gap");
    check(fs::exists(work / "gain" / "gain_sweep.csv"),
          "gap run still writes its CSV");

    // --- oracle paths (exit 4 breach, exit 0 small probe, exit 5 unstable) --
    check(run(cli + " oracle --preset paper-single --out " + out("orc")) == 4,
          "oracle at the default probe reports the truncation-floor breach");
    {
        const json j = parse(work / "orc" / "oracle.json");
        check(j.at("rel_err").at("1").get<double>() > 1e-3 &&
                  j.at("rel_err").at("2").get<double>() <= 1e-2,
              "breach is first-order only, second order within threshold");
    }
    check(run(cli + " oracle --preset paper-single --probe-ratio 0.0125 --out " +
              out("orc2")) == 0,
          "oracle with a weak probe passes both thresholds");
    check(run(cli + " oracle --preset paper-double --kappa-ratio 0.12 --out " +
              out("orc3")) == 5,
          "oracle refuses an unstable operating point");

    // --- determinism --------------------------------------------------------
    check(run(cli + " spectrum --preset paper-double --points 41 --out " +
              out("da")) == 0 &&
              run(cli + " spectrum --preset paper-double --points 41 --out " +
                  out("db")) == 0 &&
              slurp(work / "da" / "spectrum.csv") ==
                  slurp(work / "db" / "spectrum.csv") &&
              !slurp(work / "da" / "spectrum.csv").empty(),
          "identical runs produce byte-identical CSVs");
    {
        setenv("OMITLAB_THREADS", "3", 1);
        const int rc1 = run(cli + " spectrum --preset paper-double --points 41 --out " +
                            out("dt"));
        setenv("OMITLAB_THREADS", "1", 1);
        const int rc2 = run(cli + " spectrum --preset paper-double --points 41 --out " +
                            out("du"));
        unsetenv("OMITLAB_THREADS");
        check(rc1 == 0 && rc2 == 0 &&
                  slurp(work / "dt" / "spectrum.csv") ==
                      slurp(work / "du" / "spectrum.csv"),
              "worker count does not change the bytes");
    }

    std::printf("%s: %d failure(s)\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures;
}
