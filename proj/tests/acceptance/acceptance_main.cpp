// Prints one PASS/FAIL line per acceptance criterion. The exit status reports
// whether the suite ran, not whether every criterion passed; `fdkp check` is
// the gate that exits 1 on a failed criterion.
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <fdkp/acceptance.hpp>

int main(int argc, char** argv)
{
    fdkp::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--out") && i + 1 < argc) opt.outDir = argv[++i];
        else if (!std::strcmp(argv[i], "--quick")) opt.runSweep = false;
        else {
            std::cerr << "usage: fdkp_acceptance [--out DIR] [--quick]\n";
            return 2;
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    opt.log = [&](const std::string& s) {
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "[" << static_cast<int>(t) << "s] " << s << std::endl;
    };
    const auto results = fdkp::run_acceptance(opt);
    std::ostringstream report;
    int passed = 0;
    for (const auto& r : results) {
        report << fdkp::format_result(r) << '\n';
        passed += r.passed;
    }
    report << passed << "/" << results.size() << " criteria passed\n";
    std::cout << report.str();
    // ctest hides the output of passing tests, keep a copy next to the sweep
    if (!opt.outDir.empty()) {
        std::filesystem::create_directories(opt.outDir);
        std::ofstream(std::filesystem::path(opt.outDir) / "acceptance.txt") << report.str();
    }
    return 0;
}
