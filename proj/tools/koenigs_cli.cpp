// Command-line front end: classification, orbit tables, SVG renders,
// Koenigs-function checks and generator extraction.
//
// Exit codes: 0 success, 1 error, 2 inconclusive classification.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "koenigs/report.hpp"
#include "koenigs/svg.hpp"

using namespace koenigs;

namespace {

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw domain_error("cannot write output file '" + path + "'");
    out << content;
}

Complex parse_complex_flag(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semigroups of holomorphic self-maps of the unit disc: Koenigs functions, "
                 "canonical models, divergence rates and infinitesimal generators"};
    app.require_subcommand(1);

    std::string config_path, report_path, out_path, out_dir, z_text = "0,0";
    double t_max = 10.0;
    int n = 100;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration")->required();
    };

    CLI::App* cls = app.add_subcommand("classify", "classify the semigroup and emit a report");
    add_config(cls);
    cls->add_option("--report", report_path, "report path (default: config output.report or stdout)");

    CLI::App* orb = app.add_subcommand("orbit", "sample an orbit into a CSV table");
    add_config(orb);
    orb->add_option("--z", z_text, "start point re,im (default 0,0)");
    orb->add_option("--t-max", t_max, "final time")->required();
    orb->add_option("--n", n, "number of samples (>= 2)")->required();
    orb->add_option("--out", out_path, "CSV path (default stdout)");

    CLI::App* ren = app.add_subcommand("render", "render phase portrait, image domain and Re p map");
    add_config(ren);
    ren->add_option("--out-dir", out_dir, "output directory (default: config output.plots or '.')");

    CLI::App* kch = app.add_subcommand("koenigs-check", "verify a map is a Koenigs function");
    add_config(kch);
    kch->add_option("--report", report_path, "report path (default stdout)");

    CLI::App* gen = app.add_subcommand("generator", "extract G = i/h' and its Berkson-Porta data");
    add_config(gen);
    gen->add_option("--report", report_path, "report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help/usage diagnostics
        return code == 0 ? 0 : 1;
    }

    try {
        const RunConfig cfg = load_config(config_path);

        if (cls->parsed()) {
            const json rep = build_classify_report(cfg);
            const std::string path = !report_path.empty() ? report_path : cfg.output.report;
            write_or_print(path, rep.dump(2) + "\n");
            return rep["classification"]["inconclusive"].get<bool>() ? 2 : 0;
        }
        if (orb->parsed()) {
            const std::string csv = orbit_csv(cfg, DiscPoint(parse_complex_flag(z_text)), t_max, n);
            write_or_print(out_path, csv);
            return 0;
        }
        if (ren->parsed()) {
            std::string dir = !out_dir.empty() ? out_dir
                                               : (!cfg.output.plots.empty() ? cfg.output.plots : ".");
            std::filesystem::create_directories(dir);
            for (const std::string& f : render_all(cfg, dir)) std::cerr << "wrote " << f << "\n";
            return 0;
        }
        if (kch->parsed()) {
            const json rep = build_koenigs_report(cfg);
            const std::string path = !report_path.empty() ? report_path : cfg.output.report;
            write_or_print(path, rep.dump(2) + "\n");
            return 0;
        }
        if (gen->parsed()) {
            const json rep = build_generator_report(cfg);
            const std::string path = !report_path.empty() ? report_path : cfg.output.report;
            write_or_print(path, rep.dump(2) + "\n");
            return 0;
        }
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
