"""Matrix ingestion, orientation, conv-tensor reshaping, and SVD.

Every analysis in this package starts from an :class:`OrientedMatrix`
(a real n x m matrix with n >= m) and its :class:`SingularSpectrum`.
Supported on-disk formats are NPY v1.0/2.0 (little-endian float32/float64,
C order), headerless comma-separated CSV, and JSON manifests listing
multiple named arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import InputError, NumericalError

RESHAPE_MODES = ("out-by-rest", "in-by-rest")


@dataclass(frozen=True)
class MatrixSource:
    """Provenance of a loaded matrix: where it came from and how it was
    turned into a 2-D array."""

    path: str = ""
    layer: str | None = None
    reshape_mode: str | None = None
    original_shape: tuple[int, ...] | None = None
    transposed: bool = False


@dataclass(frozen=True)
class OrientedMatrix:
    """A real n x m matrix with n >= m >= 2 and finite entries.

    ``transposed`` records whether the stored array is the transpose of
    what was read from disk; orientation never changes the singular values.
    """

    data: np.ndarray
    transposed: bool = False
    source: MatrixSource = field(default_factory=MatrixSource)

    def __post_init__(self):
        if self.data.ndim != 2:
            raise InputError(f"expected a 2-D array, got ndim={self.data.ndim}")
        n, m = self.data.shape
        if n < m:
            raise InputError(f"oriented matrix must have n >= m, got {n}x{m}")
        if m < 2:
            raise InputError(f"need at least 2 rows and 2 columns, got {n}x{m}")
        if not np.all(np.isfinite(self.data)):
            raise InputError(f"matrix {self.source.path or '<memory>'} contains NaN/Inf entries")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        return self.data.shape[1]

    @property
    def q(self) -> float:
        """Aspect ratio m/n, in (0, 1]."""
        return self.data.shape[1] / self.data.shape[0]


@dataclass(frozen=True)
class SingularSpectrum:
    """Thin SVD of an oriented matrix: W = sum_i gamma_i u_i v_i^T.

    ``gamma`` is descending; ``left_vectors`` is n x m and
    ``right_vectors`` m x m, both with orthonormal columns under the
    deterministic sign convention of :func:`svd`.
    """

    gamma: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    source: MatrixSource = field(default_factory=MatrixSource)

    def __post_init__(self):
        if np.any(np.diff(self.gamma) > 0):
            raise NumericalError("singular values are not in descending order")
        if np.any(self.gamma < 0):
            raise NumericalError("negative singular value")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.left_vectors.shape[0], self.right_vectors.shape[0])

    @property
    def n(self) -> int:
        return self.left_vectors.shape[0]

    @property
    def m(self) -> int:
        return self.right_vectors.shape[0]

    @property
    def q(self) -> float:
        return self.m / self.n

    def reconstruct(self) -> np.ndarray:
        """Full reconstruction sum_i gamma_i u_i v_i^T."""
        return (self.left_vectors * self.gamma) @ self.right_vectors.T

    def validate(self, original: np.ndarray | None = None,
                 tol: float = 1e-10) -> None:
        """Check orthonormality (and reconstruction if ``original`` given).

        O(n m^2); intended for tests and post-mortems, not hot loops.
        """
        u, v = self.left_vectors, self.right_vectors
        du = np.abs(u.T @ u - np.eye(u.shape[1])).max()
        dv = np.abs(v.T @ v - np.eye(v.shape[1])).max()
        if du > tol or dv > tol:
            raise NumericalError(
                f"singular vectors not orthonormal: |U'U-I|={du:.2e}, |V'V-I|={dv:.2e}")
        if original is not None:
            resid = np.linalg.norm(self.reconstruct() - original)
            bound = tol * max(1.0, np.linalg.norm(original))
            if resid > bound:
                raise NumericalError(
                    f"reconstruction residual {resid:.2e} exceeds {bound:.2e}")


def reshape_conv(tensor: np.ndarray, mode: str = "out-by-rest") -> np.ndarray:
    """Flatten a 4-D conv weight tensor (c_out, c_in, kh, kw) to 2-D.

    ``out-by-rest`` gives (c_out, c_in*kh*kw); ``in-by-rest`` gives
    (c_in, c_out*kh*kw). Both flatten the trailing three axes of the
    (possibly permuted) tensor in row-major order, so the operation is
    bit-exact and invertible.
    """
    if tensor.ndim != 4:
        raise InputError(f"expected a 4-D tensor, got ndim={tensor.ndim}")
    if any(d < 1 for d in tensor.shape):
        raise InputError(f"all tensor dimensions must be >= 1, got {tensor.shape}")
    if mode == "out-by-rest":
        return tensor.reshape(tensor.shape[0], -1)
    if mode == "in-by-rest":
        return np.transpose(tensor, (1, 0, 2, 3)).reshape(tensor.shape[1], -1)
    raise InputError(f"unknown reshape mode {mode!r}; expected one of {RESHAPE_MODES}")


def unreshape_conv(matrix: np.ndarray, shape: tuple[int, int, int, int],
                   mode: str = "out-by-rest") -> np.ndarray:
    """Inverse of :func:`reshape_conv` for a known original shape."""
    c_out, c_in, kh, kw = shape
    if mode == "out-by-rest":
        return matrix.reshape(c_out, c_in, kh, kw)
    if mode == "in-by-rest":
        return np.transpose(matrix.reshape(c_in, c_out, kh, kw), (1, 0, 2, 3))
    raise InputError(f"unknown reshape mode {mode!r}; expected one of {RESHAPE_MODES}")


def orient(array: np.ndarray, source: MatrixSource = MatrixSource()) -> OrientedMatrix:
    """Wrap a 2-D array as an OrientedMatrix, transposing if rows < columns."""
    if array.ndim != 2:
        raise InputError(f"expected a 2-D array, got ndim={array.ndim}")
    transposed = array.shape[0] < array.shape[1]
    data = np.ascontiguousarray(array.T if transposed else array, dtype=np.float64)
    source = replace(source, transposed=transposed)
    return OrientedMatrix(data=data, transposed=transposed, source=source)


def _read_array(path: Path) -> np.ndarray:
    suffix = path.suffix.lower()
    if suffix == ".npy":
        try:
            arr = np.load(path, allow_pickle=False)
        except Exception as exc:
            raise InputError(f"failed to read NPY file {path}: {exc}") from exc
        if arr.dtype not in (np.float32, np.float64):
            raise InputError(
                f"{path}: unsupported dtype {arr.dtype}; expected float32 or float64")
        return arr
    if suffix == ".csv":
        try:
            arr = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
        except Exception as exc:
            raise InputError(f"failed to parse CSV file {path}: {exc}") from exc
        return arr
    raise InputError(f"unsupported input format {suffix!r} for {path} "
                     "(expected .npy, .csv, or a .json manifest)")


def load_manifest(path: Path) -> tuple[str, list[dict]]:
    """Read a manifest JSON listing named weight arrays.

    Accepts either ``{"model": ..., "entries": [...]}`` or a bare list of
    entries; each entry has ``name``, ``path``, ``kind`` (fc|conv) and
    ``shape``. Relative entry paths resolve against the manifest location.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except Exception as exc:
        raise InputError(f"failed to parse manifest {path}: {exc}") from exc
    if isinstance(payload, dict):
        model = str(payload.get("model", Path(path).stem))
        entries = payload.get("entries")
    else:
        model, entries = Path(path).stem, payload
    if not isinstance(entries, list) or not entries:
        raise InputError(f"manifest {path} contains no entries")
    for e in entries:
        if not isinstance(e, dict) or "name" not in e or "path" not in e:
            raise InputError(f"manifest {path}: entries need 'name' and 'path' fields")
    return model, entries


def load_matrix(path: str | Path, layer: str | None = None,
                reshape_mode: str = "out-by-rest") -> OrientedMatrix:
    """Load one matrix from an NPY/CSV file or a manifest entry.

    4-D arrays are routed through :func:`reshape_conv` with the given
    mode before orientation; ``layer`` selects the entry when ``path``
    is a manifest.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"input file does not exist: {path}")

    if path.suffix.lower() == ".json":
        _, entries = load_manifest(path)
        if layer is None:
            raise InputError(
                f"{path} is a manifest; pass a layer name (available: "
                + ", ".join(e["name"] for e in entries) + ")")
        matches = [e for e in entries if e["name"] == layer]
        if not matches:
            raise InputError(f"layer {layer!r} not found in manifest {path}")
        entry_path = Path(matches[0]["path"])
        if not entry_path.is_absolute():
            entry_path = path.parent / entry_path
        arr = _read_array(entry_path)
        src_path = str(entry_path)
    else:
        arr = _read_array(path)
        src_path = str(path)

    if not np.issubdtype(arr.dtype, np.number) or np.iscomplexobj(arr):
        raise InputError(f"{src_path}: non-real dtype {arr.dtype}")

    original_shape = tuple(int(d) for d in arr.shape)
    used_mode = None
    if arr.ndim == 4:
        arr = reshape_conv(arr, reshape_mode)
        used_mode = reshape_mode
    elif arr.ndim != 2:
        raise InputError(f"{src_path}: expected a 2-D or 4-D array, got ndim={arr.ndim}")

    source = MatrixSource(path=src_path, layer=layer,
                          reshape_mode=used_mode, original_shape=original_shape)
    return orient(arr.astype(np.float64, copy=False), source)


def _fix_signs(u: np.ndarray, vt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Sign convention: first nonzero entry of each left vector non-negative,
    # right vector flipped to match, so results reproduce across runs.
    for j in range(u.shape[1]):
        col = u[:, j]
        nz = np.flatnonzero(col)
        if nz.size and col[nz[0]] < 0:
            u[:, j] = -col
            vt[j, :] = -vt[j, :]
    return u, vt


def svd(matrix: OrientedMatrix) -> SingularSpectrum:
    """Thin SVD with descending singular values and deterministic signs."""
    try:
        u, gamma, vt = np.linalg.svd(matrix.data, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD did not converge for matrix from {matrix.source.path or '<memory>'} "
            f"(shape {matrix.n}x{matrix.m})") from exc
    u, vt = _fix_signs(u, vt)
    return SingularSpectrum(gamma=gamma, left_vectors=u,
                            right_vectors=vt.T, source=matrix.source)


def singular_values(matrix: OrientedMatrix) -> np.ndarray:
    """Descending singular values only (cheaper than :func:`svd`)."""
    try:
        return np.linalg.svd(matrix.data, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD did not converge for matrix from {matrix.source.path or '<memory>'}") from exc
