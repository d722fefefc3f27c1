"""Command-line interface: fold, probs, sample, enumerate, plot."""
from __future__ import annotations

import argparse
import os
import sys
from collections import Counter
from dataclasses import dataclass

from .alignio import Orientation, expand_interaction_pairs, parse_msa
from .compat import ConstraintSet, build_masks, load_fold_params, parse_constraints
from .dotplot import emit_dotplot
from .energy import EnergyModel, load_params, structure_energy
from .engine import (EngineConfig, hybrid_probabilities, pair_probabilities,
                     partition_function, sample)
from .errors import ConstraintError, IoError, JointFoldError
from .ioutil import atomic_write, fmt_prob, matrix_tsv
from .jointstruct import to_notation
from .oracle import Limits, brute_force

SUBCOMMANDS = ("fold", "probs", "sample", "enumerate", "plot")


@dataclass
class RunConfig:
    subcommand: str
    r_msa: str
    s_msa: str
    format: str = "fasta"
    constraints: str | None = None
    params: str | None = None
    samples: int = 1000
    seed: int = 0
    zero_energy: bool = False
    scale: float = 1.0
    out: str = "."
    s_five_to_three: bool = False


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jointfold",
                                description="RNA-RNA interaction ensembles of two alignments")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        q = sub.add_parser(name)
        q.add_argument("--r-msa", required=True, help="alignment of R (5'->3')")
        q.add_argument("--s-msa", required=True, help="alignment of S (3'->5' unless flagged)")
        q.add_argument("--format", choices=("clustal", "fasta"), default="fasta")
        q.add_argument("--constraints", help="two-line constraint file (R line, S line)")
        q.add_argument("--params", help="key=value parameter file")
        q.add_argument("--samples", type=int, default=1000)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--zero-energy", action="store_true",
                       help="all energies 0, so z counts structures")
        q.add_argument("--scale", type=float, default=1.0)
        q.add_argument("--out", default=".", help="output directory")
        q.add_argument("--s-five-to-three", action="store_true",
                       help="S alignment is written 5'->3'; reverse it")
    return p


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load(cfg: RunConfig):
    r = parse_msa(_read(cfg.r_msa), cfg.format, Orientation.FivePrimeToThreePrime)
    if cfg.s_five_to_three:
        s = parse_msa(_read(cfg.s_msa), cfg.format, Orientation.FivePrimeToThreePrime).reversed()
    else:
        s = parse_msa(_read(cfg.s_msa), cfg.format, Orientation.ThreePrimeToFivePrime)
    pa = expand_interaction_pairs(r, s)
    src = _read(cfg.params) if cfg.params else ""
    fp = load_fold_params(src)
    em = EnergyModel.zero() if cfg.zero_energy else load_params(src)
    if cfg.constraints:
        lines = [x for x in _read(cfg.constraints).splitlines() if x.strip()]
        if len(lines) != 2:
            raise ConstraintError("constraint file must hold exactly two lines")
        cs = parse_constraints(lines[0], lines[1])
    else:
        cs = ConstraintSet.empty(pa.n, pa.mlen)
    masks = build_masks(pa, fp, cs)
    return pa, masks, em


def _notation_block(js, energy, header) -> str:
    r, s = to_notation(js)
    return f">{header} {energy:.6f}\n{r}\n{s}\n"


def _out(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.out, name)


def _write(path: str, text: str) -> None:
    try:
        atomic_write(path, text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from None


def run(cfg: RunConfig) -> int:
    pa, masks, em = _load(cfg)
    if cfg.subcommand == "enumerate":
        ens = brute_force(masks, pa, em, Limits())
        text = "".join(_notation_block(js, e, k + 1) for k, (js, e, _) in enumerate(ens.structures))
        _write(_out(cfg, "enumerate.txt"), text)
        print(f"{ens.count} structures, z = {ens.z:.12g}")
        return 0
    tabs = partition_function(pa, masks, em, EngineConfig(cfg.scale))
    if cfg.subcommand == "fold":
        draws = sample(tabs, cfg.samples, cfg.seed)
        cnt = Counter(d.key() for d in draws)
        best_key, freq = min(cnt.items(), key=lambda kv: (-kv[1], kv[0]))
        best = next(d for d in draws if d.key() == best_key)
        fe = tabs.free_energy
        fe = 0.0 if fe == 0 else fe
        r, s = to_notation(best)
        text = (f"z\t{tabs.z:.12g}\nfree_energy\t{fe:.6f}\n"
                f"most_frequent\t{freq}/{cfg.samples}\t"
                f"{structure_energy(best, pa, em):.6f}\n{r}\n{s}\n")
        _write(_out(cfg, "fold.txt"), text)
        sys.stdout.write(text)
    elif cfg.subcommand == "probs":
        pm = pair_probabilities(tabs)
        hp = hybrid_probabilities(tabs)
        hy = ["i\tj\th\tl\tp"] + [f"{i}\t{j}\t{h}\t{l}\t{fmt_prob(p)}"
                                 for (i, j, h, l), p in sorted(hp.items(), key=lambda kv: (-kv[1], kv[0]))]
        outputs = {"p_interior_r.tsv": matrix_tsv(pm.p_interior_r, True),
                   "p_interior_s.tsv": matrix_tsv(pm.p_interior_s, True),
                   "p_ext.tsv": matrix_tsv(pm.p_ext, False),
                   "hybrids.tsv": "\n".join(hy) + "\n"}
        for name, text in outputs.items():
            _write(_out(cfg, name), text)
        print(f"z = {tabs.z:.12g}; wrote {', '.join(outputs)}")
    elif cfg.subcommand == "sample":
        draws = sample(tabs, cfg.samples, cfg.seed)
        text = "".join(_notation_block(js, structure_energy(js, pa, em), k + 1)
                       for k, js in enumerate(draws))
        _write(_out(cfg, "samples.txt"), text)
        print(f"wrote {cfg.samples} samples")
    elif cfg.subcommand == "plot":
        pm = pair_probabilities(tabs)
        emit_dotplot(pm, hybrid_probabilities(tabs), _out(cfg, "dotplot.svg"))
        print("wrote dotplot.svg")
    return 0


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**vars(args))
    for path in (cfg.r_msa, cfg.s_msa, cfg.constraints, cfg.params):
        if path is not None and not os.path.isfile(path):
            parser.error(f"no such file: {path}")
    if not os.path.isdir(cfg.out):
        parser.error(f"output directory does not exist: {cfg.out}")
    if cfg.samples < 1:
        parser.error("--samples must be at least 1")
    if not cfg.scale > 0:
        parser.error("--scale must be positive")
    try:
        return run(cfg)
    except JointFoldError as exc:
        print(f"jointfold: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
