from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
import typer

from relaxcheck import errors, utils
from relaxcheck.analysis import analyze_generator
from relaxcheck.cli.manifest import (
    OutputFormat,
    build_manifest,
    emit,
    exit_codes,
    finish,
    resolve_tolerances,
)
from relaxcheck.constraints import (
    RateSet,
    check_corollary,
    check_qubit_relations,
    nearest_consistent_rates,
    witness_measured_rates,
    witness_measured_times,
)
from relaxcheck.dynamics import (
    DensityMatrix,
    GridSpec,
    evolve as evolve_trajectory,
    expectation_series,
    physicality_report,
)
from relaxcheck.ensemble import (
    EnsembleConfig,
    run_ensemble,
    saturation_search,
)
from relaxcheck.ensemble.sample import rng_metadata
from relaxcheck.generator.loaders import load_generator, load_matrix
from relaxcheck.logger import DEFAULT_LEVEL, configure_logger
from relaxcheck.proofcheck import run_proofcheck, sample_bw_ratios
from relaxcheck.spectrum import stationary_state

app = typer.Typer(
    name="relaxcheck",
    help="Relaxation-rate constraints of GKLS generators: build, analyze, check, sample, evolve.",
    no_args_is_help=True,
)

GENERATOR_HELP = "Generator JSON: {d, H, C}, {d, H, lindblad_ops}, {d, family} or {d, ensemble}."
TOLERANCE_HELP = "Tolerance override KEY=VALUE (repeatable), e.g. zero=1e-8. See docs/schemas.md."
CONFIG_HELP = "YAML file with tolerance overrides."


def _csv_floats(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    items = [item.strip() for item in value.split(",") if item.strip()]
    if not items:
        raise typer.BadParameter("Expected a comma-separated list of numbers")
    return items


def _parse_rates(values: List[str]) -> List[float]:
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError) as e:
        raise errors.InvalidRateError(f"Rates must be numbers: {e}") from e


def _entries(values: Optional[List[str]]) -> Optional[List[Tuple[int, int]]]:
    if not values:
        return None
    out = []
    for value in values:
        try:
            i, j = (int(part) for part in value.split(","))
        except ValueError:
            raise typer.BadParameter(f"Entry must look like i,j, got {value!r}")
        out.append((i, j))
    return out


def _show_progress(ctx: typer.Context) -> bool:
    return not (ctx.obj or {}).get("quiet", False)


@app.callback()
def main_callback(
    ctx: typer.Context,
    quiet: bool = typer.Option(
        default=False, help="Only log warnings and errors; hide progress bars."
    ),
    log_json: bool = typer.Option(default=False, help="Write logs to stderr as JSON lines."),
):
    configure_logger("WARNING" if quiet else DEFAULT_LEVEL, json_logs=log_json)
    ctx.obj = {"quiet": quiet}


@app.command()
def build(
    input: str = typer.Argument(help=GENERATOR_HELP),
    tolerance: Optional[List[str]] = typer.Option(None, "--tolerance", help=TOLERANCE_HELP),
    config: Optional[str] = typer.Option(None, "--config", help=CONFIG_HELP),
    out_file: Optional[str] = typer.Option(None, help="Write the canonical form here."),
):
    """Validates a generator and writes its canonical (H, C) form."""
    with exit_codes("build"):
        tol = resolve_tolerances(config, tolerance)
        g = load_generator(input, tol)
        typer.echo(f"d = {g.d}, Tr C = {g.trace_kossakowski:.12g}", err=True)
        manifest = build_manifest("build", {"tolerances": tol.model_dump()}, [input, config])
        emit({"trace_C": g.trace_kossakowski, **g.to_dict()}, manifest, out_file=out_file)


@app.command()
def spectrum(
    input: str = typer.Argument(help=GENERATOR_HELP),
    tolerance: Optional[List[str]] = typer.Option(None, "--tolerance", help=TOLERANCE_HELP),
    config: Optional[str] = typer.Option(None, "--config", help=CONFIG_HELP),
    output: OutputFormat = typer.Option(OutputFormat.json, show_choices=True),
    out_file: Optional[str] = typer.Option(None, help="Output path; stdout if omitted."),
):
    """Eigenvalues, relaxation rates and times, and the spectral structure report."""
    with exit_codes("spectrum"):
        tol = resolve_tolerances(config, tolerance)
        analysis = analyze_generator(load_generator(input, tol), tol)
        profile = analysis.profile
        rho = stationary_state(analysis.spectrum)
        result = analysis.to_dict()
        result.pop("constraints")
        result["stationary_state"] = (
            None if rho is None else {"re": rho.real.tolist(), "im": rho.imag.tolist()}
        )
        table = pd.DataFrame(
            {
                "mode_index": profile.mode_indices,
                "rate": profile.rates,
                "time": profile.times,
                "frequency": profile.frequencies,
            }
        )
        manifest = build_manifest("spectrum", {"tolerances": tol.model_dump()}, [input, config])
        emit(result, manifest, output, out_file, table)


@app.command()
def check(
    input: str = typer.Argument(help=GENERATOR_HELP),
    tolerance: Optional[List[str]] = typer.Option(None, "--tolerance", help=TOLERANCE_HELP),
    config: Optional[str] = typer.Option(None, "--config", help=CONFIG_HELP),
    output: OutputFormat = typer.Option(OutputFormat.json, show_choices=True),
    out_file: Optional[str] = typer.Option(None, help="Output path; stdout if omitted."),
):
    """Checks the rate constraints on the generator's computed relaxation rates."""
    with exit_codes("check"):
        tol = resolve_tolerances(config, tolerance)
        analysis = analyze_generator(load_generator(input, tol), tol)
        rates = analysis.rates
        main = analysis.constraints
        corollary = check_corollary(rates, tol.witness)
        result = {
            "d": rates.d,
            "rates": rates.rates.tolist(),
            "main_bound": main.model_dump(),
            "half_sum_bound": corollary.model_dump(),
        }
        passed = main.passed and corollary.passed
        if rates.d == 2:
            qubit = check_qubit_relations(rates, tol.witness)
            result["qubit_triangle"] = qubit.model_dump()
            passed = passed and qubit.passed
        table = pd.DataFrame(
            {
                "mode_index": analysis.profile.mode_indices,
                "rate": rates.rates,
                "main_margin": main.margins,
                "half_sum_margin": corollary.margins,
            }
        )
        manifest = build_manifest("check", {"tolerances": tol.model_dump()}, [input, config])
        emit(result, manifest, output, out_file, table)
    finish(passed)


@app.command()
def witness(
    d: Optional[int] = typer.Option(None, "--d", help="Hilbert space dimension."),
    times: Optional[str] = typer.Option(
        None, help="Comma-separated relaxation times T_alpha; 'inf' allowed."
    ),
    rates: Optional[str] = typer.Option(None, help="Comma-separated rates instead of times."),
    input: Optional[str] = typer.Option(
        None, "--input", help='Witness JSON {"d", "times" or "rates", "tolerance"?}.'
    ),
    witness_tolerance: Optional[float] = typer.Option(
        None, help="Relative slack for measured data, e.g. 0.05."
    ),
    project: bool = typer.Option(
        default=False, help="Also report the nearest consistent rate vector."
    ),
    output: OutputFormat = typer.Option(OutputFormat.json, show_choices=True),
    out_file: Optional[str] = typer.Option(None, help="Output path; stdout if omitted."),
):
    """Tests measured relaxation times against every GKLS generator."""
    with exit_codes("witness"):
        time_values, rate_values = _csv_floats(times), _csv_floats(rates)
        if input:
            try:
                data = utils.read_json(input)
            except ValueError as e:
                raise errors.SchemaError(f"Cannot parse witness JSON {input}: {e}") from e
            if not isinstance(data, dict):
                raise errors.SchemaError("Witness JSON must be an object")
            d = data.get("d", d)
            time_values = data.get("times", time_values)
            rate_values = data.get("rates", rate_values)
            if witness_tolerance is None:
                witness_tolerance = data.get("tolerance")
        if d is None or (time_values is None) == (rate_values is None):
            raise typer.BadParameter("Give --d and exactly one of --times or --rates")
        if time_values is not None:
            verdict = witness_measured_times(time_values, d, witness_tolerance)
        else:
            verdict = witness_measured_rates(_parse_rates(rate_values), d, witness_tolerance)
        result = verdict.model_dump()
        if project:
            projected = nearest_consistent_rates(RateSet(d=d, rates=verdict.rates))
            result["nearest_consistent_rates"] = projected.rates.tolist()
        table = pd.DataFrame(
            [v.model_dump() for v in verdict.violations],
            columns=["constraint", "detail", "margin"],
        )
        manifest = build_manifest(
            "witness",
            {"d": d, "tolerance": verdict.tolerance, "project": project},
            [input],
        )
        emit(result, manifest, output, out_file, table)
    finish(verdict.consistent)


@app.command()
def sample(
    ctx: typer.Context,
    d: int = typer.Option(..., "--d", help="Hilbert space dimension."),
    n: int = typer.Option(1000, "--n", help="Number of random samples."),
    seed: int = typer.Option(0, help="64-bit seed of the Philox streams."),
    hamiltonian_scale: float = typer.Option(1.0, help="Scale of the GUE Hamiltonian."),
    rank: Optional[int] = typer.Option(None, help="Rank of the Wishart factor; full if omitted."),
    kossakowski_scale: float = typer.Option(1.0, help="Scale s of C = s G G^dagger / (d²-1)."),
    special: Optional[List[str]] = typer.Option(
        None, "--special", help="Named generator family appended as an extra sample."
    ),
    workers: int = typer.Option(1, "--workers", help="Worker processes; 1 runs serially."),
    bins: int = typer.Option(20, help="Histogram bins for the tightness ratio."),
    witness_tolerance: float = typer.Option(1e-9, help="Relative slack of the main bound."),
    search_iterations: int = typer.Option(
        0, help="Also run a saturation search with this many iterations."
    ),
    search_from: Optional[str] = typer.Option(
        None, help="Start the search from this named family instead of sample 0."
    ),
    tolerance: Optional[List[str]] = typer.Option(None, "--tolerance", help=TOLERANCE_HELP),
    config: Optional[str] = typer.Option(None, "--config", help=CONFIG_HELP),
    csv_out: Optional[str] = typer.Option(None, help="Per-sample CSV path."),
    output: OutputFormat = typer.Option(OutputFormat.json, show_choices=True),
    out_file: Optional[str] = typer.Option(None, help="Output path; stdout if omitted."),
):
    """Samples random generators and collects tightness-ratio statistics."""
    with exit_codes("sample"):
        tol = resolve_tolerances(config, tolerance)
        cfg = EnsembleConfig(
            d=d,
            n_samples=n,
            seed=seed,
            hamiltonian_scale=hamiltonian_scale,
            kossakowski_rank=rank,
            kossakowski_scale=kossakowski_scale,
            special_samples=special or [],
            n_workers=workers,
            histogram_bins=bins,
            witness_tolerance=witness_tolerance,
        )
        stats = run_ensemble(cfg, tol, show_progress=_show_progress(ctx))
        result = stats.to_dict()
        if search_iterations:
            search = saturation_search(
                cfg,
                search_iterations,
                seed_family=search_from,
                tolerances=tol,
                show_progress=_show_progress(ctx),
            )
            result["search"] = search.model_dump()
        manifest = build_manifest(
            "sample",
            {
                "ensemble": cfg.model_dump(),
                "search_iterations": search_iterations,
                "search_from": search_from,
                "tolerances": tol.model_dump(),
            },
            [config],
            rng=rng_metadata(),
        )
        if csv_out:
            utils.write_csv(stats.to_dataframe(), csv_out)
        emit(result, manifest, output, out_file, stats.to_dataframe())
    finish(stats.violation_count == 0)


@app.command()
def evolve(
    input: str = typer.Argument(help=GENERATOR_HELP),
    state: Optional[str] = typer.Option(
        None, help="Initial state as a matrix JSON; |0><0| if omitted."
    ),
    t_max: float = typer.Option(5.0, help="Final time of the uniform grid."),
    n_points: int = typer.Option(51, help="Number of grid points including t=0."),
    entry: Optional[List[str]] = typer.Option(
        None, "--entry", help="Matrix entry i,j to tabulate (repeatable)."
    ),
    observable: Optional[str] = typer.Option(
        None, help="Hermitian observable JSON; adds the expectation series."
    ),
    tolerance: Optional[List[str]] = typer.Option(None, "--tolerance", help=TOLERANCE_HELP),
    config: Optional[str] = typer.Option(None, "--config", help=CONFIG_HELP),
    output: OutputFormat = typer.Option(OutputFormat.json, show_choices=True),
    out_file: Optional[str] = typer.Option(None, help="Output path; stdout if omitted."),
):
    """Evolves a state under the generator and reports physicality diagnostics."""
    with exit_codes("evolve"):
        tol = resolve_tolerances(config, tolerance)
        g = load_generator(input, tol)
        grid = GridSpec(t_max=t_max, n_points=n_points)
        if state:
            rho0 = DensityMatrix.create(load_matrix(state, "state"), tol)
        else:
            ground = np.zeros(g.d)
            ground[0] = 1.0
            rho0 = DensityMatrix.pure(ground)
        traj = evolve_trajectory(g, rho0, grid.times(), tol)
        report = physicality_report(traj, tol)
        entries = _entries(entry)
        result = {
            "trajectory": traj.to_dict(),
            "physicality": report.model_dump(),
        }
        if observable:
            series = expectation_series(
                g, rho0, load_matrix(observable, "observable"), grid.times(), tol
            )
            result["expectation"] = series.to_dict()
        manifest = build_manifest(
            "evolve",
            {"grid": grid.model_dump(), "entries": entries, "tolerances": tol.model_dump()},
            [input, state, observable, config],
        )
        emit(result, manifest, output, out_file, traj.to_dataframe(entries))
    finish(report.passed)


@app.command()
def proofcheck(
    input: str = typer.Argument(help=GENERATOR_HELP),
    bw_pairs: int = typer.Option(
        0, help="Also sample this many random pairs for the commutator norm bound."
    ),
    seed: int = typer.Option(0, help="Seed of the commutator-pair sampling."),
    tolerance: Optional[List[str]] = typer.Option(None, "--tolerance", help=TOLERANCE_HELP),
    config: Optional[str] = typer.Option(None, "--config", help=CONFIG_HELP),
    output: OutputFormat = typer.Option(OutputFormat.json, show_choices=True),
    out_file: Optional[str] = typer.Option(None, help="Output path; stdout if omitted."),
):
    """Evaluates every step of the rate-bound argument on the generator."""
    with exit_codes("proofcheck"):
        tol = resolve_tolerances(config, tolerance)
        g = load_generator(input, tol)
        report = run_proofcheck(g, tol)
        result = report.to_dict()
        passed = report.passed
        if bw_pairs:
            bw = sample_bw_ratios(g.d, bw_pairs, seed, tol)
            result["commutator_sampling"] = bw.model_dump()
            passed = passed and bw.passed
        table = pd.DataFrame([step.to_dict() for step in report.steps])
        manifest = build_manifest(
            "proofcheck",
            {"bw_pairs": bw_pairs, "seed": seed, "tolerances": tol.model_dump()},
            [input, config],
        )
        emit(result, manifest, output, out_file, table)
    finish(passed)


def main():
    app()


if __name__ == "__main__":
    app()
