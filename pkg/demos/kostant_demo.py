"""Apply the Kostant codifferential to the worked example cochain and print the result.

    python demos/kostant_demo.py [n]     (n >= 3)
"""

import sys

from fefferman_lab import kostant_lab as kl


def main(argv):
    n = int(argv[1]) if len(argv) > 1 else 3
    M = kl.LieModel(n)
    phi = kl.extend_cochain(M, kl.worked_example(M))
    d = kl.del_star(M, phi)
    print("dim g~ = %d, dim p~ = %d" % (len(M.gt_basis), len(M.p_t)))
    for key, value in sorted(d.values.items()):
        print("d~*phi~(X_%d) =" % (key[0] + 1))
        for row in value:
            print("  " + " ".join("%5s" % str(x) for x in row))
    print("matches -Z~1 (x) Z~n^Z~2 - Z~n (x) Z~1^Z~2:", d.equals(kl.worked_example_expected(M)))
    print("in f^ (x) L2Fbar cap ker alt:", kl.in_component(M, d))
    psi = kl.normalize_step(M, phi)
    print("Psi1 = -1/2 d~*phi~ has %d nonzero values" % len(psi.values))


if __name__ == "__main__":
    main(sys.argv)
