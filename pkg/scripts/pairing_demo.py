"""Species pairing of the two example alignments and the hand-checked pair scores."""
import pathlib

from jointfold.alignio import Orientation, PairedAlignment, expand_interaction_pairs, parse_msa
from jointfold.compat import FoldParams, Side, build_masks, pair_score
from jointfold.energy import EnergyModel
from jointfold.engine import hybrid_probabilities, partition_function

DATA = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"


def main():
    r = parse_msa((DATA / "pairing_r.fasta").read_text())
    s = parse_msa((DATA / "pairing_s.fasta").read_text(),
                  orientation=Orientation.ThreePrimeToFivePrime)
    pa = expand_interaction_pairs(r, s)
    print(f"{pa.m} interacting pairs:")
    for (a, b, sp), (x, y) in zip(pa.provenance, pa.row_strings()):
        print(f"  {sp:8s} {r.rows[a].name:4s} {x}   {s.rows[b].name:4s} {y}")

    print("\npair scores (c, q, b), phi1 = 1:")
    for rows in (("GC",), ("GC", "AU"), ("GC", "AG"), ("GC", "..")):
        col = PairedAlignment.from_strings([(x, "A") for x in rows])
        print(f"  {' / '.join(rows):10s} -> {pair_score(col, Side.R, 1, 2, FoldParams())}")

    masks = build_masks(pa)
    t = partition_function(pa, masks, EnergyModel())
    print(f"\nz = {t.z:.12g}, free energy {t.free_energy:.4f} kcal/mol")
    for k, p in sorted(hybrid_probabilities(t).items(), key=lambda kv: -kv[1])[:5]:
        print(f"  hybrid R[{k[0]},{k[1]}] S[{k[2]},{k[3]}]  {p:.4f}")


if __name__ == "__main__":
    main()
