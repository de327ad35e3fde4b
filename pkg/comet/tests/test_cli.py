import io
import json
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

from django.test import SimpleTestCase

from comet import services
from comet_cli import parse_and_dispatch, parse_degree

SMALL = ["--max-i", "2", "--max-j", "2", "--max-loop", "2"]


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    with redirect_stdout(out), redirect_stderr(io.StringIO()):
        code = parse_and_dispatch(argv)
    return code, out.getvalue()


class CliTests(SimpleTestCase):
    def test_normalize(self) -> None:
        self.assertEqual(run("normalize", "(i,1) j j"), (0, "j | (i,1) j\n"))

    def test_apply(self) -> None:
        self.assertEqual(run("apply", "e:j", "(i,1) j"), (0, "none\n"))
        self.assertEqual(run("apply", "f:(i,1)", "(i,1) j"), (0, "(i,1) | (i,1) j\n"))
        self.assertEqual(run("apply", "e:j", "j | (i,1) j")[1], "(i,1) j\n")

    def test_enum_as_json(self) -> None:
        code, text = run("--format", "json", "enum", "1:2")
        self.assertEqual(code, 0)
        self.assertEqual([json.loads(line)["steep"] for line in text.splitlines()], ["j | (i,1) j", "j^2 | (i,1)"])

    def test_dims(self) -> None:
        self.assertEqual(run("--r", "0", "--max-i", "4", "--max-loop", "4", "dims"), (0, "n,count\n0,1\n1,1\n2,2\n3,4\n4,8\n"))

    def test_dims_in_degree_zero(self) -> None:
        self.assertEqual(run("--r", "1", "--max-i", "0", "--max-j", "1", "dims"), (0, "n,m1,count\n0,0,1\n0,1,1\n"))
        self.assertEqual(run("--r", "1", "--max-i", "0", "--max-j", "1", "dims", "--source", "algebra")[1], "n,m1,count\n0,0,1\n0,1,1\n")

    def test_compare(self) -> None:
        code, text = run(*SMALL, "compare", "--upto", "2,2")
        self.assertEqual(code, 0)
        self.assertIn("1,1,2,2,2,2,pass", text.splitlines())

    def test_verify_identities(self) -> None:
        code, _ = run("verify", "identities", "--grid", "2")
        self.assertEqual(code, 0)

    def test_failures_exit_one_with_witness(self) -> None:
        failing = services.records_frame([services.CheckRecord("algebra", "decomp", "1,1", False, "(i,1) j")])
        with mock.patch.object(services, "verification_frame", return_value=failing):
            code, text = run("verify", "algebra")
        self.assertEqual(code, 1)
        self.assertIn('"pass":false', text)

    def test_usage_errors(self) -> None:
        self.assertEqual(run("frobnicate")[0], 2)
        self.assertEqual(run("--omega", "1", "normalize", "j")[0], 2)
        self.assertEqual(run("normalize", "(i,1) k")[0], 2)
        self.assertEqual(run("apply", "x:j", "1")[0], 2)

    def test_parse_degree(self) -> None:
        self.assertEqual(parse_degree("2,2", 1).flat(), (2, 2))
        self.assertEqual(parse_degree("1:0,3", 2).flat(), (1, 0, 3))
        with self.assertRaises(ValueError):
            parse_degree("2", 1)
