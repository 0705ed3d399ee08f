import numpy as np
import pytest

import vortexdiff as vd
from vortexdiff.fieldio import FieldFormatError, MAGIC, _HEADER


@pytest.fixture
def small_grid():
    return vd.make_grid(16, 2.0)


def random_complex(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestVxfRoundTrip:
    def test_complex_bit_exact(self, tmp_path, small_grid):
        values = random_complex(16, seed=3)
        path = tmp_path / "f.vxf"
        vd.write_field(path, values, small_grid, time=0.625)
        dump = vd.read_field(path)
        assert np.array_equal(dump.values, values)
        assert dump.grid == small_grid
        assert dump.time == 0.625
        assert dump.kind == 0

    def test_real_bit_exact(self, tmp_path, small_grid):
        values = np.abs(random_complex(16, seed=4)) ** 2
        path = tmp_path / "f.vxf"
        vd.write_field(path, values, small_grid, time=0.0)
        dump = vd.read_field(path)
        assert np.array_equal(dump.values, values)
        assert dump.kind == 1

    def test_file_round_trip_is_byte_identical(self, tmp_path, small_grid):
        values = random_complex(16, seed=5)
        p1, p2 = tmp_path / "a.vxf", tmp_path / "b.vxf"
        vd.write_field(p1, values, small_grid, time=0.1)
        dump = vd.read_field(p1)
        vd.write_field(p2, dump.values, dump.grid, dump.time)
        assert p1.read_bytes() == p2.read_bytes()

    def test_payload_size_arithmetic(self, tmp_path):
        g = vd.make_grid(256, 8.0)
        path = tmp_path / "big.vxf"
        vd.write_field(path, np.zeros((256, 256), dtype=complex), g, time=0.0)
        assert path.stat().st_size == _HEADER.size + 256 * 256 * 2 * 8
        assert 256 * 256 * 2 * 8 == 1_048_576


class TestVxfErrors:
    def _valid_bytes(self, tmp_path, small_grid):
        path = tmp_path / "ok.vxf"
        vd.write_field(path, random_complex(16, seed=6), small_grid, time=0.5)
        return bytearray(path.read_bytes())

    def test_wrong_magic(self, tmp_path, small_grid):
        blob = self._valid_bytes(tmp_path, small_grid)
        blob[:4] = b"NOPE"
        bad = tmp_path / "bad.vxf"
        bad.write_bytes(blob)
        with pytest.raises(FieldFormatError, match="not a VXF") as err:
            vd.read_field(bad)
        assert err.value.code == FieldFormatError.BAD_MAGIC

    def test_wrong_version(self, tmp_path, small_grid):
        blob = self._valid_bytes(tmp_path, small_grid)
        blob[4:8] = (99).to_bytes(4, "little")
        bad = tmp_path / "bad.vxf"
        bad.write_bytes(blob)
        with pytest.raises(FieldFormatError) as err:
            vd.read_field(bad)
        assert err.value.code == FieldFormatError.BAD_VERSION

    def test_truncated_payload(self, tmp_path, small_grid):
        blob = self._valid_bytes(tmp_path, small_grid)
        bad = tmp_path / "bad.vxf"
        bad.write_bytes(blob[:-16])
        with pytest.raises(FieldFormatError) as err:
            vd.read_field(bad)
        assert err.value.code == FieldFormatError.TRUNCATED

    def test_oversize_payload(self, tmp_path, small_grid):
        blob = self._valid_bytes(tmp_path, small_grid)
        bad = tmp_path / "bad.vxf"
        bad.write_bytes(bytes(blob) + b"\x00" * 8)
        with pytest.raises(FieldFormatError) as err:
            vd.read_field(bad)
        assert err.value.code == FieldFormatError.SIZE_MISMATCH

    def test_truncated_header(self, tmp_path):
        bad = tmp_path / "bad.vxf"
        bad.write_bytes(MAGIC + b"\x01")
        with pytest.raises(FieldFormatError) as err:
            vd.read_field(bad)
        assert err.value.code == FieldFormatError.TRUNCATED

    def test_distinct_codes(self):
        codes = {
            FieldFormatError.BAD_MAGIC, FieldFormatError.BAD_VERSION,
            FieldFormatError.TRUNCATED, FieldFormatError.SIZE_MISMATCH,
            FieldFormatError.BAD_HEADER,
        }
        assert len(codes) == 5


class TestCsv:
    def test_field_csv_round_trips_values(self, tmp_path, small_grid):
        values = random_complex(16, seed=8)
        path = tmp_path / "f.csv"
        vd.write_field_csv(path, values, small_grid, header_lines=["demo"])
        lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
        assert lines[0] == "x,y,re,im"
        x, y, re, im = lines[1].split(",")
        assert float(x) == small_grid.coords()[0]
        assert float(re) == values[0, 0].real
        assert float(im) == values[0, 0].imag
        assert len(lines) == 1 + 16 * 16

    def test_table_round_trip(self, tmp_path):
        path = tmp_path / "t.csv"
        t = np.array([0.0, 0.1, 0.2])
        v = np.array([1.0, 0.5, 1.0 / 3.0])
        vd.write_table_csv(path, {"t": t, "value": v}, header_lines=["trace"])
        table = vd.read_table_csv(path)
        assert np.array_equal(table["t"], t)
        assert np.array_equal(table["value"], v)

    def test_seventeen_digits_round_trip_exactly(self, tmp_path):
        path = tmp_path / "t.csv"
        v = np.array([np.pi, 1.0 / 3.0, 2.0 ** -52, 1e300])
        vd.write_table_csv(path, {"v": v})
        assert np.array_equal(vd.read_table_csv(path)["v"], v)

    def test_write_is_deterministic(self, tmp_path, small_grid):
        values = random_complex(16, seed=9)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        vd.write_field_csv(p1, values, small_grid)
        vd.write_field_csv(p2, values, small_grid)
        assert p1.read_bytes() == p2.read_bytes()
