import pytest
from pydantic import ValidationError

from qfilter.schemas import BasisLayout, FilterChoice, FilterKind, FilterSpec, PrefixPattern, RunConfig, RunReport


def test_prefix_pattern_from_ket_notation():
    pattern = PrefixPattern.parse("|01x>", 5)

    assert [(c.qubit, c.bit) for c in pattern.constraints] == [(4, 0), (3, 1)]
    assert pattern.to_string(5) == "01xxx"


def test_prefix_pattern_incorrect_structure():
    with pytest.raises(ValueError, match=r"Expected a pattern of at most 3 characters"):
        PrefixPattern.parse("0a1", 3)


def test_prefix_pattern_too_long():
    with pytest.raises(ValueError, match=r"at most 2 characters"):
        PrefixPattern.parse("000", 2)


def test_prefix_pattern_repeated_qubit():
    with pytest.raises(ValidationError, match=r"distinct qubits"):
        PrefixPattern.model_validate({"constraints": [{"qubit": 1, "bit": 0}, {"qubit": 1, "bit": 1}]})


def test_filter_spec_from_json():
    spec = FilterSpec.model_validate_json('{"n": 4, "marked": [15, 0, 1], "prefixes": [], "keep_marked": false}')

    assert spec.n_data_qubits == 4
    assert spec.marked_count() == 3
    assert spec.model_dump()["marked"] == [0, 1, 15]


def test_filter_spec_prefix_round_trip():
    spec = FilterSpec.model_validate({"n": 14, "prefixes": ["0000", "1111"], "keep_marked": True})

    assert spec.model_dump()["prefixes"] == ["0000xxxxxxxxxx", "1111xxxxxxxxxx"]
    assert FilterSpec.model_validate(spec.model_dump()) == spec


def test_filter_spec_index_outside_register():
    with pytest.raises(ValidationError, match=r"outside 0..15"):
        FilterSpec(n=4, marked={16})


def test_filter_spec_pattern_covers_index():
    with pytest.raises(ValidationError, match=r"also covers"):
        FilterSpec.model_validate({"n": 3, "marked": [1], "prefixes": ["0"]})


def test_filter_spec_masks_partition_basis():
    spec = FilterSpec.model_validate({"n": 4, "marked": [15], "prefixes": ["00"]})

    assert spec.marked_mask().sum() == spec.marked_count() == 5
    assert (spec.marked_mask() ^ spec.surviving_mask()).all()


def test_layout_row_major():
    layout = BasisLayout.row_major(4)

    assert layout.side == 4
    assert layout.n_qubits == 4
    assert layout.root[1] == (4, 5, 6, 7)


def test_custom_filter_needs_marks():
    with pytest.raises(ValidationError, match=r"custom filter needs"):
        FilterChoice(kind=FilterKind.CUSTOM)


def test_run_config_defaults():
    config = RunConfig(input="signal.csv")

    assert config.filter.kind is FilterKind.HIGH_PASS
    assert config.resolved_format() == "csv"


def test_run_config_infers_image_format():
    assert RunConfig(input="photo.PGM").resolved_format() == "pgm"


def test_sample_mode_requires_seed():
    with pytest.raises(ValidationError, match=r"requires a seed"):
        RunConfig(input="signal.csv", mode="sample")


def test_report_serialises_schema_version():
    report = RunReport(
        command="transpose",
        n_qubits=4,
        success_probability=1,
        normalizer=2.0,
        pad_count=0,
        max_residual_imaginary=0,
        wall_time=0,
    )

    assert report.model_dump()["schema"] == 1
