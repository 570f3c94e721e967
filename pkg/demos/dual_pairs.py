"""Turn the tabulated beta envelope into exponent pairs by tangent-line duality."""

from exppairs import dual_pairs, envelope_hull, table3_envelope
from exppairs.numeric import format_fraction


def main() -> None:
    env = table3_envelope(corrected=True)
    chain = envelope_hull(env)
    print(f"upper chain has {len(chain)} vertices")
    for d in dual_pairs(chain):
        k, l = d.pair.k, d.pair.l
        tag = d.known_as or "new"
        print(f"  ({format_fraction(k)}, {format_fraction(l)})  {tag}  admissible={d.admissible}")


if __name__ == "__main__":
    main()
