"""Smoke test for the pyhypermatch extension.

Build and run from the repository root:

    cargo build --release -p hypermatch-python --features extension-module
    cp target/release/libpyhypermatch.so python/pyhypermatch.so
    python3 python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyhypermatch as hm


def main():
    k9 = hm.Hypergraph.generate("complete", 9)
    assert (k9.n, k9.k, len(k9)) == (9, 3, 84)
    m = k9.perfect_matching()
    assert m is not None and len(m) == 3
    assert hm.decide(k9)["verdict"] == "yes"

    odd = hm.Hypergraph.generate("parity-odd", 12, x=7)
    assert odd.min_codegree() == 4
    assert odd.perfect_matching() is None
    report = hm.decide(odd, method="all")
    assert report["schema"] == hm.SCHEMA_VERSION == 1
    assert report["verdict"] == "no" and report["agree"]
    assert hm.parity_bipartition(odd)[0] == list(range(7))
    cert = hm.find_certificate(odd)
    assert cert is not None and len(cert["cover_set"]) == cert["s"]

    space = hm.Hypergraph.generate("space", 9, s=2)
    assert space.max_matching_size() == 2
    failed = hm.decide(space, method="slow")
    assert failed["verdict"] == "unknown" and "codegree" in failed["results"][0]["error"]

    even = hm.Hypergraph.generate("parity-even", 12, x=5)
    a = hm.analyze(even)
    assert a["d_prime"] == 2 and a["coset_order"] == {"finite": 2}

    lodd = hm.Lattice.odd(3)
    assert lodd.coset_order(3) == 2
    assert lodd.contains([1, 2]) and not lodd.contains([2, 1])
    assert [l.coset_order(3) for l in hm.full_lattices(2, 3)] == [2, 2]
    parts = [list(range(7)), list(range(7, 12))]
    assert hm.soluble(odd, parts, lodd) is None
    assert hm.list_partitions(odd, 2, lodd) == [parts]

    text = odd.serialize()
    again = hm.Hypergraph.parse(text)
    assert again.edges == odd.edges
    try:
        hm.Hypergraph(4, 3, [[0, 1, 9]])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range vertex accepted")

    print("pyhypermatch smoke test passed")


if __name__ == "__main__":
    main()
