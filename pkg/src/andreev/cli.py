"""Command-line interface.

Subcommands:

  verify     run the cross-validation suite (optionally filtered)
  eval-jack  evaluate one Jack polynomial
  eval-hfma  evaluate a matrix-argument 2F1 with tail diagnostics
  eval-jpdf  evaluate a reflection-eigenvalue density
  sample     spool Metropolis samples of the Poisson kernel to CSV
  compare    sampled vs analytic single-eigenvalue density, with overlay
             CSV and a rendered figure

Exit codes: 0 success, 1 verification failure, 2 usage error.
Numeric outputs are reproducible bit-for-bit for a fixed (config, seed);
every emitted file carries the package version and the configuration.
ANDREEV_THREADS caps chain-level parallelism for `sample`/`compare`.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .ensembles import (
    EnsembleSpec,
    analytic_bin_probabilities,
    jpdf_ideal,
    jpdf_semi_ideal,
    marginal_density,
)
from .hypergeom import TruncationPolicy, hfma1, hfma2
from .sampling import (
    ChainConfig,
    bin_probability_stderr,
    empirical_density,
    reflection_samples,
)
from .symfunc import jack_eval


def version_string() -> str:
    """Package version, extended git-describe style when inside a checkout."""
    base = f"andreev-{__version__}"
    try:
        desc = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True,
            text=True, timeout=5,
        )
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{base}+g{desc.stdout.strip()}"
    except Exception:
        pass
    return base


def provenance(config: dict) -> dict:
    return {"version": version_string(), "config": config}


def _write_json(path: Path, payload: dict, config: dict) -> None:
    payload = {**provenance(config), **payload}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list, rows, config: dict) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# {version_string()} config={json.dumps(config, sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _parse_alpha(text: str) -> Fraction:
    return Fraction(text)


def _spec_from_args(args) -> EnsembleSpec:
    if getattr(args, "config", None):
        data = json.loads(Path(args.config).read_text())
        return EnsembleSpec.from_json(data.get("spec", data))
    gamma = tuple(_parse_floats(args.gamma)) if args.gamma else ()
    return EnsembleSpec(kind=args.kind, n=args.n, m=args.m, gamma=gamma)


def _policy_from_args(args) -> TruncationPolicy:
    return TruncationPolicy(max_weight=args.max_weight, rel_tol=args.rel_tol)


def _add_spec_flags(p, need_gamma=True):
    p.add_argument("--config", help="JSON file holding {spec: {kind,n,m,gamma}}")
    p.add_argument("--kind", choices=("CRE", "CQE", "PRE", "PQE"))
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    if need_gamma:
        p.add_argument("--gamma", help="coupling(s), e.g. '0.5' or '0.3,0.6'")


def _add_policy_flags(p):
    p.add_argument("--max-weight", type=int, default=120)
    p.add_argument("--rel-tol", type=float, default=1e-9)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ANDREEV_THREADS", "1")))
    except ValueError:
        return 1


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_verify(args) -> int:
    from . import verify

    results = verify.run_suite(args.filter)
    if not results:
        print(f"no checks match filter {args.filter!r}", file=sys.stderr)
        return 2
    for r in results:
        print(r.line())
    n_fail = sum(1 for r in results if not r.passed)
    print(f"\n{len(results) - n_fail}/{len(results)} checks passed")
    config = {"filter": args.filter}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "verify.json", {
            "results": [r.__dict__ | {"tags": list(r.tags)} for r in results],
            "failed": n_fail,
        }, config)
        if not args.no_figure:
            from .figures import save_verify_figure

            save_verify_figure(out / "verify.png", results)
        print(f"report written to {out}/verify.json")
    return 1 if n_fail else 0


def cmd_eval_jack(args) -> int:
    lam = tuple(int(p) for p in _parse_floats(args.partition))
    x = _parse_floats(args.x)
    value = jack_eval(lam, _parse_alpha(args.alpha), x)
    print(json.dumps({"partition": list(lam), "alpha": args.alpha,
                      "x": x, "value": value}))
    return 0


def cmd_eval_hfma(args) -> int:
    policy = _policy_from_args(args)
    alpha = _parse_alpha(args.alpha)
    X = _parse_floats(args.x)
    if args.y:
        res = hfma2(args.a, args.b, args.c, alpha, X, _parse_floats(args.y), policy)
    else:
        res = hfma1(args.a, args.b, args.c, alpha, X, policy)
    print(json.dumps({
        "value": res.value, "tail_estimate": res.tail_estimate,
        "layers_used": res.layers_used, "converged": res.converged,
    }))
    return 0


def cmd_eval_jpdf(args) -> int:
    spec = _spec_from_args(args)
    R = _parse_floats(args.r)
    if spec.kind in ("CRE", "CQE"):
        value = jpdf_ideal(spec, R)
    else:
        value = jpdf_semi_ideal(spec, R, _policy_from_args(args))
    print(json.dumps({"spec": json.loads(spec.to_json()), "R": R, "value": value}))
    return 0


def _run_chains(spec, args):
    """Split the sample budget over chains; deterministic merge in chain order."""
    chains = max(1, args.chains)
    per = -(-args.samples // chains)
    cfgs = [ChainConfig(seed=args.seed, burn_in=args.burn_in, thinning=args.thinning,
                        samples=per, chain_id=cid) for cid in range(chains)]
    workers = min(_threads(), chains)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: reflection_samples(spec, c), cfgs))
    else:
        parts = [reflection_samples(spec, c) for c in cfgs]
    R = np.concatenate([p[0] for p in parts])[: args.samples]
    chain_ids = np.concatenate([np.full(p[0].shape[0], cid)
                                for cid, p in enumerate(parts)])[: args.samples]
    rate = float(np.mean([p[1] for p in parts]))
    return R, rate, chain_ids


def cmd_sample(args) -> int:
    spec = _spec_from_args(args)
    R, rate, chain_ids = _run_chains(spec, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = {"spec": json.loads(spec.to_json()), "seed": args.seed,
              "burn_in": args.burn_in, "thinning": args.thinning,
              "samples": args.samples, "chains": args.chains}
    rows = [[int(chain_ids[i]), i] + [f"{x:.17g}" for x in row]
            for i, row in enumerate(R)]
    _write_csv(out / "samples.csv",
               ["chain", "index"] + [f"R{j+1}" for j in range(spec.n)],
               rows, config)
    _write_json(out / "sample.json", {"acceptance_rate": rate,
                                      "kept_samples": int(R.shape[0])}, config)
    print(f"acceptance rate {rate:.4f}; spooled {R.shape[0]} spectra to {out}/samples.csv")
    return 0


def cmd_compare(args) -> int:
    spec = _spec_from_args(args)
    if spec.n > 2:
        print("compare supports n <= 2", file=sys.stderr)
        return 2
    policy = _policy_from_args(args)
    R, rate, _ = _run_chains(spec, args)
    hist = empirical_density(R, bins=args.bins)
    edges = np.asarray(hist["bin_edges"])
    probs = analytic_bin_probabilities(spec, edges, policy)
    total = R.size
    widths = np.diff(edges)
    sigma = np.maximum(bin_probability_stderr(R, edges),
                       np.sqrt(probs * (1.0 - probs)) / total)
    emp_p = np.asarray(hist["counts"]) / total
    dev = np.abs(emp_p - probs) / sigma
    frac_3sigma = float(np.mean(dev <= 3.0))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = {"spec": json.loads(spec.to_json()), "seed": args.seed,
              "burn_in": args.burn_in, "thinning": args.thinning,
              "samples": args.samples, "bins": args.bins, "chains": args.chains}
    centers = 0.5 * (edges[:-1] + edges[1:])
    rows = [
        [f"{centers[k]:.17g}", f"{hist['density'][k]:.17g}",
         f"{hist['stderr'][k]:.17g}", f"{probs[k] / widths[k]:.17g}",
         f"{dev[k]:.17g}"]
        for k in range(args.bins)
    ]
    _write_csv(out / "compare.csv",
               ["bin_center", "empirical_density", "stderr", "analytic_density",
                "deviation_sigma"], rows, config)
    stats = {
        "acceptance_rate": rate,
        "fraction_within_3sigma": frac_3sigma,
        "max_deviation_sigma": float(dev.max()),
    }
    _write_json(out / "compare.json", stats, config)
    if not args.no_figure:
        from .figures import save_compare_figure

        grid = np.linspace(edges[0] + 1e-4, edges[-1] - 1e-4, 400)
        curve = marginal_density(spec, grid, policy)
        save_compare_figure(out / "compare.png", hist, grid, curve,
                            f"{spec.kind} n={spec.n} m={spec.m} gamma={spec.gamma}")
    print(f"{frac_3sigma:.0%} of bins within 3 sigma "
          f"(max {dev.max():.2f} sigma); outputs in {out}/")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="andreev",
        description="Reflection-eigenvalue statistics of Andreev quantum dots",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the cross-validation suite")
    p.add_argument("--filter", help="tag or name substring (e.g. symfunc, c8)")
    p.add_argument("--out", help="directory for verify.json (+ figure)")
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval-jack", help="evaluate a Jack polynomial")
    p.add_argument("--partition", required=True, help="e.g. '2,1'")
    p.add_argument("--alpha", required=True, help="e.g. '1/2', '1', '2'")
    p.add_argument("--x", required=True, help="evaluation point, e.g. '0.3,0.2'")
    p.set_defaults(func=cmd_eval_jack)

    p = sub.add_parser("eval-hfma", help="evaluate a matrix-argument 2F1")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", help="second matrix argument (two-argument form)")
    _add_policy_flags(p)
    p.set_defaults(func=cmd_eval_hfma)

    p = sub.add_parser("eval-jpdf", help="evaluate a reflection-eigenvalue density")
    _add_spec_flags(p)
    p.add_argument("--r", required=True, help="spectrum, e.g. '0.3,0.7'")
    _add_policy_flags(p)
    p.set_defaults(func=cmd_eval_jpdf)

    for name, fn in (("sample", cmd_sample), ("compare", cmd_compare)):
        p = sub.add_parser(name, help=f"{name} Metropolis chains")
        _add_spec_flags(p)
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--burn-in", type=int, default=2000)
        p.add_argument("--thinning", type=int, default=3)
        p.add_argument("--chains", type=int, default=1)
        p.add_argument("--out", required=True)
        _add_policy_flags(p)
        if name == "compare":
            p.add_argument("--bins", type=int, default=40)
            p.add_argument("--no-figure", action="store_true")
        p.set_defaults(func=fn)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
