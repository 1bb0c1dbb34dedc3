"""Monte-Carlo simulation, paired comparison and LLR statistics."""

from __future__ import annotations

import numpy as np
import pytest

from tinyturbo.channel.model import ChannelSpec
from tinyturbo.channel.streams import SIMULATION
from tinyturbo.coding.codec import make_code
from tinyturbo.core.errors import ConfigurationError
from tinyturbo.decoding.decoder import DecodeConfig
from tinyturbo.decoding.weights import tinyturbo_preset
from tinyturbo.simulation.harness import (
    StopRule,
    analyze_llr,
    compare,
    paired_sign_test,
    simulate,
)
from tinyturbo.simulation.sampling import draw_batch


@pytest.fixture(scope="module")
def code():
    return make_code(40)


def test_stop_rule() -> None:
    rule = StopRule(max_frames=1000, min_block_errors=10, min_frames=200)
    assert not rule.done(100, 50)
    assert rule.done(200, 10)
    assert not rule.done(300, 9)
    assert rule.done(1000, 0)
    assert not StopRule(max_frames=50, min_block_errors=None).done(49, 49)
    with pytest.raises(ConfigurationError):
        StopRule(max_frames=0)
    with pytest.raises(ConfigurationError):
        StopRule(min_block_errors=0)


def test_frames_depend_only_on_their_index(code) -> None:
    spec = ChannelSpec(snr_db=1.0)
    whole = draw_batch(code, spec, seed=3, stream=SIMULATION, start=0, count=10)
    tail = draw_batch(code, spec, seed=3, stream=SIMULATION, start=6, count=4)
    assert np.array_equal(whole.messages[6:], tail.messages)
    assert np.array_equal(whole.received[6:], tail.received)
    zero = draw_batch(code, spec, seed=3, stream=SIMULATION, start=0, count=2, all_zero=True)
    assert not zero.messages.any()


def test_high_snr_has_no_errors(code) -> None:
    result = simulate(
        code,
        DecodeConfig.classical(3, "max_log_map"),
        ChannelSpec(),
        [10.0],
        StopRule(max_frames=200, min_block_errors=None),
        batch_size=50,
    )
    row = result.rows[0]
    assert row.frames == 200
    assert row.ber == 0.0 and row.bler == 0.0


def test_stops_after_the_chunk_reaching_the_target(code) -> None:
    result = simulate(
        code,
        DecodeConfig.classical(1, "max_log_map"),
        ChannelSpec(),
        [-3.0],
        StopRule(max_frames=10_000, min_block_errors=5),
        batch_size=20,
    )
    row = result.rows[0]
    assert row.frames == 20
    assert row.block_errors >= 5
    assert row.bit_errors >= row.block_errors


def test_results_do_not_depend_on_worker_count(code) -> None:
    kwargs = dict(seed=11, batch_size=25)
    args = (code, DecodeConfig.classical(2, "max_log_map"), ChannelSpec(), [0.0, 1.0], StopRule(max_frames=300, min_block_errors=30))
    serial = simulate(*args, workers=1, **kwargs)
    threaded = simulate(*args, workers=4, **kwargs)
    assert [r.to_dict() for r in serial.rows] == [r.to_dict() for r in threaded.rows]


def test_compare_identical_decoders_agree(code) -> None:
    decoder = DecodeConfig(3, "max_log_map", tinyturbo_preset())
    result = compare(
        code,
        [decoder, decoder],
        ChannelSpec(),
        [0.0],
        StopRule(max_frames=100, min_block_errors=None),
        batch_size=50,
    )
    first, second = result.labels
    assert second == f"{first}#2"
    assert result.rows[first][0].to_dict() == result.rows[second][0].to_dict()
    assert np.array_equal(result.frame_errors[first][0], result.frame_errors[second][0])
    test = result.sign_test(first, second, 0)
    assert test.wins == test.losses == 0
    assert test.p_value == 1.0 and not test.significant


def test_compare_waits_for_every_decoder(code) -> None:
    strong = DecodeConfig.classical(6, "map")
    weak = DecodeConfig.classical(1, "max_log_map")
    result = compare(
        code,
        [strong, weak],
        ChannelSpec(),
        [0.5],
        StopRule(max_frames=2000, min_block_errors=10),
        batch_size=50,
        labels=["strong", "weak"],
    )
    assert result.rows["strong"][0].frames == result.rows["weak"][0].frames
    stopped = result.rows["strong"][0].frames < 2000
    assert not stopped or min(r[0].block_errors for r in result.rows.values()) >= 10
    assert result.frame_errors["weak"][0].shape == (result.rows["weak"][0].frames,)


def test_compare_label_errors(code) -> None:
    decoder = DecodeConfig.classical(1)
    with pytest.raises(ConfigurationError):
        compare(code, [], ChannelSpec(), [0.0])
    with pytest.raises(ConfigurationError):
        compare(code, [decoder, decoder], ChannelSpec(), [0.0], labels=["a", "a"])


def test_grids_longer_than_the_stream_field_are_rejected(code) -> None:
    grid = [0.0] * 257
    decoder = DecodeConfig.classical(1)
    with pytest.raises(ConfigurationError):
        simulate(code, decoder, ChannelSpec(), grid)
    with pytest.raises(ConfigurationError):
        compare(code, [decoder], ChannelSpec(), grid)


def test_sign_test_p_values() -> None:
    # 10 wins, no losses: 2^-10
    test = paired_sign_test(np.zeros(12), np.r_[np.ones(10), np.zeros(2)])
    assert (test.wins, test.losses, test.ties) == (10, 0, 2)
    assert test.p_value == pytest.approx(2.0 ** -10)
    assert test.significant
    balanced = paired_sign_test(np.r_[np.zeros(5), np.ones(5)], np.r_[np.ones(5), np.zeros(5)])
    assert balanced.p_value == pytest.approx(0.623046875)
    assert not balanced.significant
    large = paired_sign_test(np.zeros(5000), np.ones(5000))
    assert large.p_value < 1e-300
    with pytest.raises(ConfigurationError):
        paired_sign_test(np.zeros(3), np.zeros(4))


def test_analyze_llr_statistics(code) -> None:
    channel = ChannelSpec(kind="deterministic_burst", snr_db=2.0, burst_position=56, burst_amplitude=10.0)
    stats = analyze_llr(code, [DecodeConfig.classical(3, "max_log_map")], channel, 30, batch_size=8)
    (item,) = stats
    assert item.trials == 30
    assert item.mean.shape == item.std.shape == (40,)
    assert np.all(item.std >= 0.0)
    assert 0.0 <= item.zero_crossing_fraction <= 1.0
    assert item.label == "classical-max_log_map-3"


def test_all_zero_posteriors_are_negative(code) -> None:
    (item,) = analyze_llr(code, [DecodeConfig(3, "max_log_map", tinyturbo_preset())], ChannelSpec(snr_db=2.0), 200)
    assert np.all(item.mean < 0.0)
    assert item.zero_crossing_fraction < 1.0
