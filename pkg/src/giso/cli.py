"""Command-line front end: ``giso gi`` and ``giso si``.

Exit codes: 0 isomorphic, 1 not isomorphic, 2 node budget exceeded, 64 input error.
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import click

from .certificates import format_certificate
from .coset import IsoCoset
from .graphs import GraphFormatError, parse_graph, solve_gi
from .perm import PermGroup, format_permutation, parse_permutation
from .solver import BudgetExceeded, SolverConfig, solve_iso

EXIT_ISO = 0
EXIT_NONISO = 1
EXIT_BUDGET = 2
EXIT_INPUT = 64


class InstanceError(ValueError):
    """Malformed string-isomorphism instance."""


def parse_si_instance(text: str):
    """``n``, then the tokens of x, then the tokens of y, then one generator per line in cycle notation.

    Tokens are arbitrary whitespace-free words; they are numbered in sorted order.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 3:
        raise InstanceError("expected n, x, y and generator lines")
    try:
        n = int(lines[0])
    except ValueError:
        raise InstanceError(f"bad degree {lines[0]!r}") from None
    xs, ys = lines[1].split(), lines[2].split()
    if n == 0:
        xs, ys = [t for t in xs if t != "-"], [t for t in ys if t != "-"]
    if len(xs) != n or len(ys) != n:
        raise InstanceError(f"strings must have exactly {n} tokens")
    alphabet = {t: i for i, t in enumerate(sorted(set(xs) | set(ys)))}
    try:
        gens = [parse_permutation(ln, n) for ln in lines[3:]]
    except (ValueError, IndexError) as exc:
        raise InstanceError(str(exc)) from None
    x = tuple(alphabet[t] for t in xs)
    y = tuple(alphabet[t] for t in ys)
    return PermGroup(n, gens), x, y


def report(coset: IsoCoset) -> int:
    if coset.is_empty():
        click.echo("NONISO")
        return EXIT_NONISO
    click.echo("ISO")
    click.echo(format_permutation(coset.rep))
    for g in coset.group.generators:
        click.echo("AUT " + format_permutation(g))
    return EXIT_ISO


def build_config(brute_threshold, budget, relax_k, cert_k, trace_cases, dump_certificates) -> SolverConfig:
    config = SolverConfig(brute_threshold=brute_threshold, budget=budget, relax_k=relax_k, cert_k=cert_k)
    if trace_cases:
        def trace(entry):
            click.echo(json.dumps(entry, default=str, sort_keys=True), err=True)
        config.trace = trace
    if dump_certificates is not None:
        folder = Path(dump_certificates)
        folder.mkdir(parents=True, exist_ok=True)
        counter = [0]

        def dump(cert):
            counter[0] += 1
            (folder / f"cert_{counter[0]:05d}.txt").write_text(format_certificate(cert) + "\n")
        config.dump_certificates = dump
    return config


def solver_options(f):
    options = [
        click.option("--brute-threshold", type=int, default=10**4, show_default=True,
                     help="Enumerate groups of at most this order directly."),
        click.option("--budget", type=int, default=10**7, show_default=True,
                     help="Maximum number of solver nodes."),
        click.option("--relax-k", is_flag=True, help="Allow small certificate test sets (k >= 3)."),
        click.option("--cert-k", type=int, default=None, help="Certificate test-set size."),
        click.option("--trace-cases", is_flag=True, help="Write one JSON record per solver event to stderr."),
        click.option("--dump-certificates", type=click.Path(file_okay=False), default=None,
                     help="Directory receiving every local certificate."),
        click.option("--seed", type=int, default=0, show_default=True, help="Seed for the harness RNG."),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def run(task) -> int:
    try:
        return report(task())
    except BudgetExceeded as exc:
        click.echo(f"BUDGET {exc}", err=True)
        return EXIT_BUDGET


@click.group()
def main():
    """Exact graph and string isomorphism."""


@main.command()
@click.argument("file1", type=click.Path(dir_okay=False))
@click.argument("file2", type=click.Path(dir_okay=False))
@solver_options
def gi(file1, file2, brute_threshold, budget, relax_k, cert_k, trace_cases, dump_certificates, seed):
    """Decide whether two graphs in edge-list format are isomorphic."""
    random.seed(seed)
    try:
        g1 = parse_graph(Path(file1).read_text())
        g2 = parse_graph(Path(file2).read_text())
    except (OSError, GraphFormatError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    config = build_config(brute_threshold, budget, relax_k, cert_k, trace_cases, dump_certificates)
    sys.exit(run(lambda: solve_gi(g1, g2, config)))


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@solver_options
def si(instance, brute_threshold, budget, relax_k, cert_k, trace_cases, dump_certificates, seed):
    """Decide string isomorphism under a permutation group."""
    random.seed(seed)
    try:
        group, x, y = parse_si_instance(Path(instance).read_text())
    except (OSError, InstanceError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    config = build_config(brute_threshold, budget, relax_k, cert_k, trace_cases, dump_certificates)
    sys.exit(run(lambda: solve_iso(group, x, y, config)))


if __name__ == "__main__":
    main()
