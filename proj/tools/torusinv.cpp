#include <CLI11.hpp>

#include "commands.hpp"

using namespace torusinv::cli;

namespace {

void add_outputs(CLI::App* c, Outputs& o) {
    c->add_option("--json", o.json, "write the JSON report here");
    c->add_option("--svg", o.svg, "write an SVG plot here");
    c->add_option("--csv", o.csv, "write the curve samples (t,q1,q2) here");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arnold-type invariants of torus-type periodic orbits in the rotating Kepler and Euler problems"};
    app.require_subcommand(1);

    RkpArgs rkp;
    auto* r = app.add_subcommand("rkp", "rotating Kepler problem orbit of type (k, l)");
    r->add_option("--k", rkp.k)->required();
    r->add_option("--l", rkp.l)->required();
    r->add_option("--ecc", rkp.ecc, "eccentricity in (0, 1)")->capture_default_str();
    r->add_option("--phase", rkp.phase, "argument of perihelion, radians")->capture_default_str();
    r->add_option("--sense", rkp.sense, "positive or negative angular momentum")->capture_default_str();
    r->add_option("--samples", rkp.samples, "samples per revolution (default 4096)");
    add_outputs(r, rkp.out);

    EulerArgs eu;
    auto* e = app.add_subcommand("euler", "Euler two-centre problem orbit of type (k, l)");
    e->add_option("--mu", eu.mu)->capture_default_str();
    e->add_option("--k", eu.k)->required();
    e->add_option("--l", eu.l)->required();
    e->add_option("--energy", eu.energy, "energy c below c1 (default: middle of the attainable range)");
    e->add_option("--kind", eu.kind, "generic, brake-brake, brake-collision or collision-collision")
        ->capture_default_str();
    e->add_option("--phase", eu.phase, "generic phase in units of T/(2kl); disables retries");
    e->add_option("--seed", eu.seed, "seed for the retry phases")->capture_default_str();
    e->add_option("--samples", eu.samples, "samples per lambda cycle (default 2048)");
    add_outputs(e, eu.out);

    CompareArgs cmp;
    auto* c = app.add_subcommand("compare", "check the invariant agreement of an RKP family and its Euler partner");
    c->add_option("--k", cmp.k)->required();
    c->add_option("--l", cmp.l)->required();
    c->add_option("--mu", cmp.mu, "also compute both orbits numerically at this mass ratio");
    c->add_option("--ecc", cmp.ecc)->capture_default_str();
    c->add_option("--seed", cmp.seed)->capture_default_str();
    c->add_option("--json", cmp.json);

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "run many cases from a JSON config or a built-in grid");
    auto* cfg = s->add_option("--config", sw.config, "JSON config file");
    auto* grid = s->add_option("--grid", sw.grid, "rkp, euler or all: every coprime k <= 9 > l");
    cfg->excludes(grid);
    s->add_option("--output-dir", sw.output_dir);
    s->add_option("--threads", sw.threads, "worker threads (default: TORUSINV_THREADS or all cores)");
    s->add_option("--seed", sw.seed)->capture_default_str();

    InvariantsArgs inv;
    auto* i = app.add_subcommand("invariants", "invariants of a curve file (t,q1,q2 per line)");
    i->add_option("--curve", inv.curve)->required();
    i->add_option("--cx", inv.cx, "centre for w0, j1 and j2")->capture_default_str();
    i->add_option("--cy", inv.cy)->capture_default_str();
    i->add_option("--min-angle", inv.min_angle)->capture_default_str();
    i->add_option("--json", inv.json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kInvalid;
    }

    if (*r) return guarded(rkp.out.json, [](const void* a) { return cmd_rkp(*static_cast<const RkpArgs*>(a)); }, &rkp);
    if (*e) return guarded(eu.out.json, [](const void* a) { return cmd_euler(*static_cast<const EulerArgs*>(a)); }, &eu);
    if (*c) return guarded(cmp.json, [](const void* a) { return cmd_compare(*static_cast<const CompareArgs*>(a)); }, &cmp);
    if (*s) return guarded({}, [](const void* a) { return cmd_sweep(*static_cast<const SweepArgs*>(a)); }, &sw);
    return guarded(inv.json, [](const void* a) { return cmd_invariants(*static_cast<const InvariantsArgs*>(a)); }, &inv);
}
