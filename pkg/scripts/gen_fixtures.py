import json
from realsurf.picard import PicardLattice
from realsurf.conicbundle import *
from realsurf.documents import pencil_to_json

OUT = "/root/pkg/src/realsurf/fixtures/"

def dump(name, doc):
    doc = {"kind": doc.pop("kind"), "name": name, **doc}
    with open(OUT + name + ".json", "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")

def comb(rank, *terms):
    out = [0] * rank
    for k, v in terms:
        for i, x in enumerate(v):
            out[i] += k * x
    return out

def lat(n, **kw):
    return {"kind": "lattice-pair", "n": n, **kw}

ident = {"builtin": "identity"}
dump("p2", lat(0, description="The projective plane with its standard real structure.", galois=ident))
dump("split_dp6", lat(3, description="Blow-up of three real points of the plane.", galois=ident))
dump("split_dp3", lat(6, description="Cubic surface with 27 real lines.", galois=ident))
dump("geiser_split", lat(7, description="Degree 2 del Pezzo surface with all lines real and the Geiser involution.",
                         galois=ident, holo={"builtin": "geiser"}, catalog_extras={"genus": 3}))
dump("geiser_twisted", lat(7, description="Degree 2 del Pezzo surface whose real structure is the Geiser twist.",
                           galois={"builtin": "geiser"}, holo={"builtin": "geiser"}, catalog_extras={"genus": 3}))
dump("bertini_split", lat(8, description="Degree 1 del Pezzo surface with all lines real and the Bertini involution.",
                          galois=ident, holo={"builtin": "bertini"}, catalog_extras={"genus": 4}))
dump("bertini_twisted", lat(8, description="Degree 1 del Pezzo surface whose real structure is the Bertini twist.",
                            galois={"builtin": "bertini"}, holo={"builtin": "bertini"}, catalog_extras={"genus": 4}))

# conic bundle with fiber class H - E1; fiber j has components E_{j+2}, F - E_{j+2}
def components(n):
    L = PicardLattice(n)
    F = comb(L.rank, (1, L.H), (-1, L.E(1)))
    return F, [list(L.E(j)) for j in range(2, n + 1)] + [comb(L.rank, (1, F), (-1, L.E(j))) for j in range(2, n + 1)]

L7 = PicardLattice(7)
F, comps = components(7)
H, E = L7.H, L7.E
sections = [
    comb(8, (1, H), (-1, E(4)), (-1, E(5)), (-1, E(6))),
    comb(8, (2, H), (-1, E(1)), (-1, E(2)), (-1, E(3)), (-1, E(4)), (-1, E(5)), (-1, E(7))),
    comb(8, (1, H), (-1, E(2)), (-1, E(3)), (-1, E(6))),
    comb(8, (1, E(1)), (-1, E(7))),
]
dump("ex25_lattice", lat(
    7,
    description="Lattice model of the pencil s^2 f + t^2 g with a = (4, 1, -1) and tau = (s:t) -> (s:-t). "
                "Fibers over u = 2, -2, 1, -1, i, -i carry E2..E7; the four extra curves are (-2)-sections.",
    galois={"conic_bundle": {"fiber_perm": [0, 1, 2, 3, 5, 4], "swaps": [0, 1]}},
    holo={"conic_bundle": {"fiber_perm": [1, 0, 3, 2, 5, 4], "swaps": [4, 5]}},
    surface_kind="conic_bundle_model", curves=comps + sections, fiber_class=F,
    pencil=pencil_to_json(example_2_5(4, 1, -1))))
dump("ex25_pencil", pencil_to_json(example_2_5(4, 1, -1)))
dump("ex28_lattice", lat(
    7,
    description="Lattice model of the same pencil with a = (4, 2, 1) and the involution x2 -> -x2. "
                "Fibers over u = 2, -2, sqrt2, -sqrt2, 1, -1 carry E2..E7.",
    galois={"conic_bundle": {"fiber_perm": [0, 1, 2, 3, 4, 5], "swaps": [0, 1, 4, 5]}},
    holo={"conic_bundle": {"fiber_perm": [0, 1, 2, 3, 4, 5], "swaps": [0, 1, 2, 3]}},
    surface_kind="conic_bundle_model", curves=comps, fiber_class=F,
    pencil=pencil_to_json(example_2_8(4, 2, 1))))
dump("ex28_pencil", pencil_to_json(example_2_8(4, 2, 1)))
dump("kowalevskaya_pencil", pencil_to_json(kowalevskaya_quotient(2)))
dump("two_component_pencil", pencil_to_json(diagonal_bundle(linear_product([-2, -1, 1, 2]))))
one = BinaryForm.constant(1)
dump("empty_locus_pencil", pencil_to_json(QuadricPencilSurface.diagonal(one, one, BinaryForm(2, [1, 0, 1]))))

F5, comps5 = components(5)
dump("dp4_conic_bundle", lat(
    5,
    description="Degree 4 conic bundle whose four singular fibers all have conjugate components; "
                "the involution exchanges the fibers in pairs.",
    galois={"conic_bundle": {"fiber_perm": [0, 1, 2, 3], "swaps": [0, 1, 2, 3]}},
    holo={"conic_bundle": {"fiber_perm": [1, 0, 3, 2], "swaps": []}},
    fiber_class=F5))
