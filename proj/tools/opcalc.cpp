#include "opcalc/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"symbolic-numeric calculus for linear differential operators"};

    std::string subcommand, path;
    opcalc::CliOptions opt;
    app.add_option("subcommand", subcommand,
                   "normalize | symbol | mainpart | commute | poisson | rank | "
                   "check-integrable | check-correlation | check-dependence | check-nec | "
                   "homogenize | verify")
        ->required();
    app.add_option("file", path, "system-definition file")->required();
    app.add_option("--seed", opt.seed, "sampling seed");
    app.add_option("--samples", opt.samples, "sample count per numeric check");
    app.add_option("--tol", opt.tol, "residual tolerance");
    app.add_flag("--verify", opt.verify, "append oracle cross-checks to the report");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    opcalc::SystemFile sf;
    try {
        sf = opcalc::parse_system(buf.str());
    } catch (const opcalc::ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
    }

    opcalc::CliResult r = opcalc::run_subcommand(subcommand, sf, opt);
    std::cout << r.output;
    return r.exit_code;
}
