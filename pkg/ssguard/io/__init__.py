from .profile_io import load_profile, save_profile
from .series_io import load_loop, load_points, load_series, save_series
from .report_io import dump_report, load_report, save_report, save_summary_csv
from .fixture_catalog import (
    build_fixture,
    closed_form_field,
    default_fixture_grid,
    expected_outcomes,
    fixture_families,
    fixture_params,
    make_fixture,
)
