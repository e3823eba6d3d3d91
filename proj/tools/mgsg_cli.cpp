#include <iostream>

#include "CLI11.hpp"
#include "mgsg/cli.hpp"

int main(int argc, char** argv)
{
    mgsg::CliOptions o;
    CLI::App app{"Laplace operators on metric graphs: classification, Green's functions, semigroups, walks"};
    app.add_option("command", o.command, "validate | classify | smatrix | green | eigs | feller | evolve | walks | verify")
        ->required();
    app.add_option("input", o.input, "graph and conditions file (JSON)")->required();
    app.add_option("--k", o.k, "complex spectral parameter re,im");
    app.add_option("--kappa", o.kappa, "k = i kappa");
    app.add_option("--x", o.x, "first point edge:pos");
    app.add_option("--y", o.y, "second point edge:pos");
    app.add_option("--t", o.t, "time");
    app.add_option("--cutoff", o.cutoff, "metric length cutoff for walks");
    app.add_option("--grid", o.grid, "grid size (meaning depends on the command)");
    app.add_option("--seed", o.seed, "seed for random sampling and witness searches");
    app.add_option("--range", o.range, "kappa range lo,hi for eigs");
    app.add_option("--format", o.format, "json | csv");
    app.add_option("--from", o.from, "walk start edge[:-|:+]");
    app.add_option("--to", o.to, "walk end edge[:-|:+]");
    app.add_option("--psi0", o.psi0, "initial data: bump:edge:centre:width | sine:edge | const:value");
    app.add_option("--method", o.method, "evolve method: spectral | fd");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    auto r = mgsg::run(o);
    std::cout << r.output;
    return r.exit_code;
}
