// fracmat: batch front-end for matrix-order differintegration tasks.
//
// Reads one TaskSpec (JSON), dispatches it, and writes a machine-readable
// report. Exit status: 0 when every checked tolerance passed, 1 when a check
// failed, 2 on schema or domain errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fracmat/task.hpp"

int main(int argc, char** argv) {
    CLI::App app{"matrix-order differintegration task runner"};
    std::string spec_path;
    std::string out_path;
    std::string format = "json";
    bool verbose = false;
    app.add_option("--spec", spec_path, "path to the TaskSpec JSON file")->required();
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--format", format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--verbose", verbose, "include timing in the report and log to stderr");
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(spec_path);
        if (!in) {
            std::cerr << "fracmat: cannot open spec file: " << spec_path << "\n";
            return 2;
        }
        nlohmann::json parsed;
        try {
            in >> parsed;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "fracmat: invalid JSON in " << spec_path << ": " << e.what()
                      << "\n";
            return 2;
        }

        const fracmat::TaskSpec task = fracmat::parse_task(parsed);
        const fracmat::Report report = fracmat::run(task);
        const std::string rendered = format == "csv"
                                         ? fracmat::emit_csv(report)
                                         : fracmat::emit_json(report, verbose);
        if (out_path.empty()) {
            std::cout << rendered;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "fracmat: cannot open output path: " << out_path << "\n";
                return 2;
            }
            out << rendered;
        }
        if (verbose) {
            std::cerr << "task '" << task.kind << "' finished in " << report.timing_ms
                      << " ms; checks " << (report.pass ? "passed" : "FAILED") << "\n";
        }
        return report.pass ? 0 : 1;
    } catch (const fracmat::schema_error& e) {
        std::cerr << "fracmat: schema error: " << e.what() << "\n";
        return 2;
    } catch (const fracmat::error& e) {
        std::cerr << "fracmat: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fracmat: unexpected error: " << e.what() << "\n";
        return 2;
    }
}
