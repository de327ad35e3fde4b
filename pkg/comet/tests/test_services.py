import json
import tempfile
from pathlib import Path
from unittest import mock

from django.test import SimpleTestCase

from comet import services
from comet.quiver import DegreeVector, QuiverParams

SMALL = QuiverParams(omega=2, r=1, max_i=2, max_j=2, max_loop=2)


class ReportTests(SimpleTestCase):
    def test_empty_csv_is_header_only(self) -> None:
        frame = services.records_frame([])
        self.assertEqual(services.render_report(frame, "csv"), "suite,fact,params,pass,witness\n")
        self.assertEqual(services.render_report(frame, "json"), "")

    def test_failing_record_as_json(self) -> None:
        frame = services.records_frame([services.CheckRecord("algebra", "decomp", "1,1", False, "(i,1) j")])
        lines = services.render_report(frame, "json").splitlines()
        self.assertEqual(len(lines), 1)
        record = json.loads(lines[0])
        self.assertEqual(list(record), ["suite", "fact", "params", "pass", "witness"])
        self.assertIs(record["pass"], False)
        self.assertEqual(record["witness"], "(i,1) j")

    def test_emit_to_file(self) -> None:
        frame = services.dimension_frame(QuiverParams(r=0, max_i=2, max_j=0, max_loop=2))
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "reports" / "dims.csv"
            text = services.emit_report(frame, "csv", target)
            self.assertEqual(target.read_text(encoding="utf-8"), text)
        self.assertEqual(text, "n,count\n0,1\n1,1\n2,2\n")

    def test_unknown_format(self) -> None:
        with self.assertRaises(ValueError):
            services.render_report(services.records_frame([]), "xml")


class TableTests(SimpleTestCase):
    def test_dimensions_without_real_vertices(self) -> None:
        frame = services.dimension_frame(QuiverParams(r=0, max_i=4, max_j=0, max_loop=4))
        self.assertEqual(frame["count"].tolist(), [1, 1, 2, 4, 8])

    def test_sources_agree(self) -> None:
        tables = [services.dimension_frame(SMALL, source) for source in services.DIMENSION_SOURCES]
        self.assertTrue(tables[0].equals(tables[1]))
        self.assertTrue(tables[0].equals(tables[2]))
        with self.assertRaises(ValueError):
            services.dimension_frame(SMALL, "oracle")

    def test_compare_table(self) -> None:
        frame = services.compare_frame(SMALL, DegreeVector.of(2, 2))
        self.assertEqual(list(frame.columns), ["n", "m1", "series", "recursion", "steep", "quotient", "status"])
        self.assertIn("1,1,2,2,2,2,pass", services.render_report(frame, "csv").splitlines())
        self.assertTrue((frame["status"] == "pass").all())


class SuiteTests(SimpleTestCase):
    def test_identities(self) -> None:
        frame = services.verification_frame("identities", SMALL, grid=2, seed=7)
        self.assertGreater(len(frame), 0)
        self.assertTrue(services.failures(frame).empty)

    def test_crystal(self) -> None:
        frame = services.verification_frame("crystal", SMALL)
        self.assertTrue(services.failures(frame).empty, services.failures(frame).to_string())
        self.assertIn("exactness", set(frame["fact"]))
        self.assertIn("confluence", set(frame["fact"]))

    def test_algebra(self) -> None:
        frame = services.verification_frame("algebra", SMALL)
        self.assertTrue(services.failures(frame).empty, services.failures(frame).to_string())
        self.assertIn("gen_serre", set(frame["fact"]))

    def test_omega_independence(self) -> None:
        frame = services.verification_frame("omega", SMALL)
        self.assertTrue(frame["pass"].all(), services.failures(frame).to_string())
        counts = frame[frame["fact"] == "crystal_counts"]
        self.assertEqual(sorted(counts["params"]), ["2", "3"])
        self.assertEqual(frame[frame["fact"] == "dimensions"]["params"].tolist(), ["2,3"])

    def test_omega_table_mismatch_is_reported(self) -> None:
        real = services.dimension_frame

        def shifted(params: QuiverParams, source: str = "series", upto: DegreeVector | None = None):
            frame = real(params, source, upto)
            if source == "algebra" and params.omega == 3:
                frame.loc[frame.index[-1], "count"] += 1
            return frame

        with mock.patch.object(services, "dimension_frame", side_effect=shifted):
            records = list(services.omega_records(SMALL))
        self.assertEqual([record.passed for record in records], [True, False, False])
        self.assertIn('"count_b"', records[-1].witness)

    def test_unknown_suite(self) -> None:
        with self.assertRaises(ValueError):
            services.verification_frame("everything", SMALL)

    def test_specialization_points_are_seeded(self) -> None:
        self.assertEqual(services.specialization_points(3, 1), services.specialization_points(3, 1))
        points = services.specialization_points(60, 5)
        self.assertEqual(len(set(points)), 60)
