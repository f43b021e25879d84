"""Print the worked examples: alphabets, the three reference systems and their valuations."""

from fractions import Fraction

from tracesys.dcs import full_report, maximal_execution
from tracesys.fixtures import (alphabet_m1, alphabet_m2, system_a, system_a_weights, system_b, system_c,
                               system_c_weights)
from tracesys.mobius import growth_coefficients, mobius_polynomial
from tracesys.polynomial import smallest_root
from tracesys.system import convergence_radii, mobius_matrix, spectral_check, states_cliques_digraph
from tracesys.traces import normalize_word, render_heap
from tracesys.valuation import build_valuation, chain_model, null_nodes

F = Fraction


def heading(text):
    print(f"\n== {text}")


def alphabets():
    for name, al in (("M1", alphabet_m1()), ("M2", alphabet_m2())):
        mu = mobius_polynomial(al)
        heading(f"alphabet {name}")
        print(f"mobius polynomial  {mu}")
        print(f"smallest root      {smallest_root(mu)}")
        print(f"traces by length   {growth_coefficients(al, 8)}")
    x = normalize_word(alphabet_m2(), "a0 a3 a0 a2 a1 a3 a4".split())
    print(f"\nnormal form of a0a3a0a2a1a3a4: {x}")
    print(render_heap(x))


def system(name, sys_):
    heading(f"system {name}")
    rep = full_report(sys_)
    mu = mobius_matrix(sys_)
    for a in sys_.states:
        print("  " + " | ".join(f"{mu[a, b]}" for b in sys_.states))
    print(f"theta      {rep.extras['theta_text']}")
    print(f"root       {rep.characteristic_root}")
    radii = convergence_radii(sys_)
    print("radii      " + ", ".join(f"{s}: {r}" for s, r in radii.radii.items()))
    print(f"digraph    {len(states_cliques_digraph(sys_).nodes)} nonempty nodes")
    print(f"dcs={rep.dcs.is_dcs} irreducible={rep.irreducible.irreducible} "
          f"dominant probabilistic={rep.dominant_probabilistic}")
    print("boundary   " + ", ".join(f"{s}: {b.kind}" for s, b in rep.boundary.items()))
    if rep.irreducible.irreducible:
        for row in spectral_check(sys_).rows:
            print(f"  without {row.letter}: root {row.root}  larger: {row.greater}")
    if rep.dcs.is_dcs:
        print(f"maximal execution from {sys_.states[0]}: {maximal_execution(sys_, sys_.states[0])}")


def valuations():
    sys_ = system_a()
    val = build_valuation(sys_, system_a_weights(F(1, 2), F(1, 2), F(1, 3), F(2, 3)))
    chain = chain_model(sys_, val)
    heading("two-state example, p = q = 1/2, s = 1/3, t = 2/3")
    for s in sys_.states:
        print(f"h_{s}: " + ", ".join(f"{sys_.alphabet.format_clique(sys_.alphabet.mask_of(c))}={v}"
                                     for c, v in val.mobius.of(s).items()))
    print("initial at α0: " + ", ".join(f"{chain.format_node(n)} {p}" for n, p in chain.initial[0].items()))
    print(f"null nodes: {sorted((s, ''.join(sorted(c))) for s, c in null_nodes(sys_, val))}")
    sys_c = system_c()
    heading("reducible deterministic family")
    for p in (F(0), F(1, 4), F(1, 2), F(1)):
        init = chain_model(sys_c, build_valuation(sys_c, system_c_weights(p))).initial[0]
        print(f"p = {p}: " + ", ".join(f"{chain.format_node(n)} {v}" for n, v in init.items()))


if __name__ == "__main__":
    alphabets()
    for name, sys_ in (("A", system_a()), ("B", system_b()), ("C", system_c())):
        system(name, sys_)
    valuations()
