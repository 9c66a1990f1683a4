import itertools
import json

import numpy as np
import pytest
from scipy.linalg import null_space

from spincover.clifford_bases import (
    ISY,
    SX,
    SZ,
    I2,
    basis_for,
    catalog,
    check_axioms,
    check_bp,
    export_catalog_json,
    extensions_up_to,
    ic1_extend,
    ic2_extend,
    ic3_extend,
    real_image,
    representation_basis,
    verify_catalog,
)
from spincover.core_linalg import QuatMatrix, theta_h
from spincover.errors import BasisError

# printed catalog entries that fail the exact checks (independently confirmed
# by the numpy checks below)
PRINTED_FAILURES = {"B3,0", "B5,0", "B0,4", "B0,6", "B0,7", "B0,8"}


def numeric_axiom_failures(mats, p):
    """Independent float check of the Clifford relations on numpy matrices."""
    shapes = {m.shape for m in mats}
    if len(shapes) > 1:
        return ["shape"]
    bad = []
    for i, A in enumerate(mats):
        eye = np.eye(A.shape[0])
        if not np.allclose(A @ A, eye if i < p else -eye):
            bad.append(f"sq{i + 1}")
        for j in range(i + 1, len(mats)):
            if not np.allclose(A @ mats[j] + mats[j] @ A, 0):
                bad.append(f"ac{i + 1}{j + 1}")
    return bad


def numeric_matrices(b):
    out = []
    for m in b.matrices:
        if b.field == "quaternion":
            out.append(theta_h(QuatMatrix(m.astype(float))))
        else:
            out.append(np.asarray(m, dtype=complex))
    return out


@pytest.mark.parametrize("key", sorted(catalog()))
def test_working_bases_pass_exactly(key):
    b = catalog()[key].working
    ax, bp = check_axioms(b), check_bp(b)
    assert ax.exact and ax.ok, ax.failures()
    assert bp.exact and bp.ok
    assert numeric_axiom_failures(numeric_matrices(b), b.signature.p) == []


@pytest.mark.parametrize("key", sorted(catalog()))
def test_printed_failures_agree_with_numpy(key):
    e = catalog()[key]
    numeric_bad = numeric_axiom_failures(numeric_matrices(e.printed), e.printed.signature.p)
    assert (numeric_bad != []) == (key in PRINTED_FAILURES)
    assert check_axioms(e.printed).ok == (key not in PRINTED_FAILURES)


def test_b70_printed_passes():
    e = catalog()["B7,0"]
    assert e.corrected is None
    assert check_axioms(e.printed).ok and check_bp(e.printed).ok


def test_verify_catalog_ledger():
    found = {d.key for d in verify_catalog()}
    assert found == PRINTED_FAILURES | {"B4,1"}
    for d in verify_catalog():
        assert "corrected: axioms pass, BP pass" in d.correction


def test_real_images_are_representations():
    for key in ("B3,0", "B0,2", "B0,4", "B4,1", "B5,0"):
        b = catalog()[key].working
        mats = [m.astype(float) for m in b.real_images()]
        assert numeric_axiom_failures(mats, b.signature.p) == []


def test_real_image_of_complex_and_quaternion():
    assert np.array_equal(real_image(np.array([[1j]]), "complex"), [[0, -1], [1, 0]])
    R = real_image(np.array([[[0, 0, 1, 0]]]), "quaternion")
    assert R.shape == (4, 4)
    assert np.array_equal(R @ R, -np.eye(4))


def test_no_fourth_anticommuting_element_for_b04():
    """Quaternionic 2x2 matrices anticommuting with diag(i,i), diag(j,j), diag(k,k) are zero."""
    units = np.eye(4)
    gens = [QuatMatrix(np.array([[u, np.zeros(4)], [np.zeros(4), u]])) for u in units[1:]]
    cols = []
    for idx in range(16):
        e = np.zeros(16)
        e[idx] = 1.0
        M = QuatMatrix(e.reshape(2, 2, 4))
        cols.append(np.concatenate([(g @ M + M @ g).data.ravel() for g in gens]))
    assert null_space(np.array(cols).T).shape[1] == 0


def test_b08_correction_is_unique():
    pieces = [I2, SX, SZ, ISY]
    fixed = catalog()["B0,8"].corrected.matrices
    others = [m for k, m in enumerate(fixed) if k != 2]
    hits = []
    for combo in itertools.product(range(4), repeat=4):
        M = pieces[combo[0]]
        for c in combo[1:]:
            M = np.kron(M, pieces[c])
        if not np.array_equal(M @ M, -np.eye(16, dtype=np.int64)):
            continue
        if all(np.array_equal(M @ O + O @ M, 0 * M) for O in others):
            hits.append(combo)
    assert hits == [(0, 1, 1, 3)]  # I2 (x) sigma_x (x) sigma_x (x) i sigma_y


def test_extensions():
    bases = list(extensions_up_to(10))
    assert len({b.name for b in bases}) == len(bases)
    for b in bases:
        assert b.n <= 10
        assert check_axioms(b).ok and check_bp(b).ok, b.name
    sigs = {(b.signature.p, b.signature.q) for b in bases}
    assert all((p, q) in sigs for p in range(11) for q in range(11 - p) if p + q > 0)


def test_extension_shapes():
    b = ic1_extend(basis_for((2, 1)))
    assert (b.signature.p, b.signature.q) == (3, 2)
    e = ic2_extend(basis_for((1, 0)))
    assert (e.signature.p, e.signature.q) == (9, 0)
    z = ic3_extend(catalog()["B0,0"].working)
    assert [m.tolist() for m in z.matrices] == [m.tolist() for m in basis_for((0, 8)).matrices]


def test_basis_variants():
    assert basis_for((4, 1), "printed").name != basis_for((4, 1)).name
    assert basis_for((1, 1), "alt").name == "B1,1/alt"
    with pytest.raises(BasisError):
        basis_for((9, 9))
    with pytest.raises(BasisError):
        basis_for((2, 1), "bogus")
    assert representation_basis((3, 3)).signature.n == 6


def test_export_catalog_json(tmp_path):
    path = tmp_path / "catalog.json"
    text = export_catalog_json(str(path))
    data = json.loads(path.read_text())
    assert data == json.loads(text)
    keys = [item["key"] for item in data["bases"]]
    assert set(keys) == set(catalog())
    b08 = next(item for item in data["bases"] if item["key"] == "B0,8")
    assert "corrected" in b08 and b08["printed"]["field"] == "real"


def test_ic1_from_empty_basis_gives_pauli_pair():
    b = ic1_extend(catalog()["B0,0"].working)
    assert [m.tolist() for m in b.matrices] == [SX.tolist(), ISY.tolist()]
