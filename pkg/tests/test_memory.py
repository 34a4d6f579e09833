import numpy as np
import pytest

from attentive_teleop.mapping import GridSpec, TopDownSaliency
from attentive_teleop.memory import (AttentivenessMap, MemoryParams,
                                     attention_rates, decay, encode, load_map,
                                     rescale_decay, save_map, update)


GRID = GridSpec(resolution=0.25, origin=(0.0, 0.0), width=8, height=6)


def visible(cells):
    return TopDownSaliency(cells=dict(cells))


class TestAttentionRates:
    def test_rates_partition_unity(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            n = rng.integers(1, 10)
            cells = {(int(i), 0): float(s)
                     for i, s in enumerate(rng.uniform(0.1, 255, n))}
            rates = attention_rates(visible(cells))
            assert sum(rates.values()) == pytest.approx(1.0, rel=1e-12)
            for cell, s in cells.items():
                assert rates[cell] == pytest.approx(s / sum(cells.values()))

    def test_all_zero_view_gives_zero_rates(self):
        rates = attention_rates(visible({(0, 0): 0.0, (1, 0): 0.0}))
        assert all(r == 0.0 for r in rates.values())

    def test_single_cell_takes_everything(self):
        rates = attention_rates(visible({(2, 3): 42.0}))
        assert rates[(2, 3)] == 1.0


class TestClosedForms:
    def test_visible_growth(self):
        """Constantly attended cell: m_n = 1 - (1 - c r)^n exactly."""
        params = MemoryParams(encoding_rate=0.4, decay_rate=0.01)
        amap = AttentivenessMap.zeros(GRID)
        view = visible({(1, 1): 50.0})  # sole visible cell, rate c = 1
        for n in range(1, 200):
            amap = update(amap, view, params)
            expected = 1.0 - (1.0 - 0.4) ** n
            assert amap.values[1, 1] == pytest.approx(expected, abs=1e-12)

    def test_hidden_decay(self):
        """Unseen cell: m_n = m_0 (1 - D)^n exactly."""
        params = MemoryParams(encoding_rate=0.4, decay_rate=0.01)
        values = np.zeros((GRID.width, GRID.height))
        values[5, 5] = 0.8
        amap = AttentivenessMap(grid=GRID, values=values)
        view = visible({(0, 0): 10.0})
        for n in range(1, 200):
            amap = update(amap, view, params)
            assert amap.values[5, 5] == pytest.approx(0.8 * 0.99 ** n, abs=1e-12)

    def test_alternating_encode_decay_sequence(self):
        """Encode at effective rate 0.5, decay at 0.5, alternating."""
        params = MemoryParams(encoding_rate=0.5, decay_rate=0.5)
        amap = AttentivenessMap.zeros(GRID)
        view = visible({(0, 0): 1.0})
        hidden = visible({(1, 0): 1.0})
        seq = []
        for _ in range(2):
            amap = update(amap, view, params)
            seq.append(amap.values[0, 0])
            amap = update(amap, hidden, params)
            seq.append(amap.values[0, 0])
        assert seq == pytest.approx([0.5, 0.25, 0.625, 0.3125], abs=1e-15)

    def test_split_attention_slows_encoding(self):
        params = MemoryParams(encoding_rate=0.4)
        amap = AttentivenessMap.zeros(GRID)
        amap = update(amap, visible({(0, 0): 1.0, (1, 0): 1.0}), params)
        # Each cell gets rate 0.5, so growth is c*r = 0.2.
        assert amap.values[0, 0] == pytest.approx(0.2)
        assert amap.values[1, 0] == pytest.approx(0.2)


class TestInvariants:
    def test_range_preserved_under_fuzz(self):
        rng = np.random.default_rng(13)
        params = MemoryParams(encoding_rate=0.7, decay_rate=0.05)
        amap = AttentivenessMap.zeros(GRID)
        for _ in range(500):
            n = rng.integers(0, 6)
            cells = {(int(rng.integers(0, GRID.width)),
                      int(rng.integers(0, GRID.height))): float(s)
                     for s in rng.uniform(0, 255, n)}
            amap = update(amap, visible(cells), params)
            assert float(amap.values.min()) >= 0.0
            assert float(amap.values.max()) <= 1.0

    def test_never_seen_cells_stay_exactly_zero(self):
        rng = np.random.default_rng(14)
        amap = AttentivenessMap.zeros(GRID)
        seen = set()
        for _ in range(300):
            cells = {(int(rng.integers(0, 4)), int(rng.integers(0, 3))): 10.0}
            seen |= set(cells)
            amap = update(amap, visible(cells))
        for i in range(GRID.width):
            for j in range(GRID.height):
                if (i, j) not in seen:
                    assert amap.values[i, j] == 0.0

    def test_tick_counter_advances(self):
        amap = AttentivenessMap.zeros(GRID)
        amap = update(amap, visible({(0, 0): 1.0}))
        assert amap.tick == 1

    def test_update_rejects_off_grid_cells(self):
        amap = AttentivenessMap.zeros(GRID)
        with pytest.raises(ValueError, match="outside"):
            update(amap, visible({(99, 0): 1.0}))

    def test_at_lookup(self):
        values = np.zeros((GRID.width, GRID.height))
        values[1, 2] = 0.7
        amap = AttentivenessMap(grid=GRID, values=values)
        assert amap.at(0.3, 0.6) == 0.7  # cell (1, 2) at 0.25 m resolution
        assert amap.at(-5.0, 0.0) == 0.0


class TestParamValidation:
    def test_bounds(self):
        with pytest.raises(ValueError):
            MemoryParams(encoding_rate=0.0)
        with pytest.raises(ValueError):
            MemoryParams(encoding_rate=1.5)
        with pytest.raises(ValueError):
            MemoryParams(decay_rate=-0.1)

    def test_rescale_decay_composes(self):
        """Two half-duration decays equal one full-duration decay."""
        d = 0.3
        half = rescale_decay(d, 0.5)
        assert (1 - half) ** 2 == pytest.approx(1 - d, rel=1e-12)
        assert rescale_decay(d, 1.0) == pytest.approx(d)


class TestSnapshotIO:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(15)
        values = rng.uniform(0, 1, size=(GRID.width, GRID.height))
        amap = AttentivenessMap(grid=GRID, values=values, tick=77)
        path = tmp_path / "snap.bin"
        save_map(amap, path)
        loaded = load_map(path)
        assert loaded.grid == GRID
        assert loaded.tick == 77
        assert np.array_equal(loaded.values, values)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"definitely not a map snapshot")
        with pytest.raises(ValueError, match="snapshot"):
            load_map(path)
