import json

from click.testing import CliRunner

from giso.cli import main


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_gi_isomorphic(tmp_path):
    a = write(tmp_path, "a.txt", "p undirected 3 2\ne 0 1\ne 1 2\n")
    b = write(tmp_path, "b.txt", "p undirected 3 2\ne 0 2\ne 2 1\n")
    result = CliRunner().invoke(main, ["gi", a, b])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "ISO"
    assert lines[1] == "(0 1 2)"
    assert all(line.startswith("AUT ") for line in lines[2:])


def test_gi_not_isomorphic(tmp_path):
    a = write(tmp_path, "a.txt", "p undirected 3 3\ne 0 1\ne 1 2\ne 0 2\n")
    b = write(tmp_path, "b.txt", "p undirected 3 2\ne 0 1\ne 1 2\n")
    result = CliRunner().invoke(main, ["gi", a, b])
    assert result.exit_code == 1
    assert result.output.strip() == "NONISO"


def test_gi_input_error(tmp_path):
    a = write(tmp_path, "a.txt", "p undirected 3 2\ne 0 1\n")
    result = CliRunner().invoke(main, ["gi", a, a])
    assert result.exit_code == 64


def test_si_instance(tmp_path):
    inst = write(tmp_path, "s.txt", "4\na b a b\nb a b a\n(0 1 2 3)\n")
    result = CliRunner().invoke(main, ["si", inst])
    assert result.exit_code == 0
    assert result.output.splitlines()[:2] == ["ISO", "(0 1 2 3)"]


def test_si_non_isomorphic(tmp_path):
    inst = write(tmp_path, "s.txt", "3\na a b\nb a a\n(0 1)\n")
    result = CliRunner().invoke(main, ["si", inst])
    assert result.exit_code == 1


def test_si_bad_generator(tmp_path):
    inst = write(tmp_path, "s.txt", "3\na a b\nb a a\n(0 7)\n")
    assert CliRunner().invoke(main, ["si", inst]).exit_code == 64


def test_budget_exit_code(tmp_path):
    edges = "".join(f"e {a} {b}\n" for a in range(8) for b in range(a + 1, 8) if (a + b) % 3 == 0)
    count = edges.count("\n")
    a = write(tmp_path, "a.txt", f"p undirected 8 {count}\n" + edges)
    result = CliRunner().invoke(main, ["gi", a, a, "--budget", "3", "--brute-threshold", "10"])
    assert result.exit_code == 2


def test_trace_cases_emits_json_lines(tmp_path):
    edges = "".join(f"e {i} {(i + 1) % 6}\n" for i in range(6))
    a = write(tmp_path, "a.txt", "p undirected 6 6\n" + edges)
    result = CliRunner().invoke(main, ["gi", a, a, "--trace-cases", "--brute-threshold", "10"])
    assert result.exit_code == 0
    records = [json.loads(line) for line in result.stderr.splitlines() if line.startswith("{")]
    assert records and all("event" in r for r in records)


def test_dump_certificates(tmp_path):
    # Sym(7) on ordered pairs, routed to the certificate pipeline
    pairs = [(a, b) for a in range(7) for b in range(7) if a != b]
    index = {p: i for i, p in enumerate(pairs)}
    gens = []
    for g in ([1, 2, 3, 4, 5, 6, 0], [1, 0, 2, 3, 4, 5, 6]):
        img = [index[(g[a], g[b])] for a, b in pairs]
        seen, cycles = set(), []
        for i in range(len(img)):
            if i in seen or img[i] == i:
                continue
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j)
                j = img[j]
            cycles.append("(" + " ".join(map(str, c)) + ")")
        gens.append("".join(cycles))
    x = " ".join(str(int(a < 3 and b < 3)) for a, b in pairs)
    inst = write(tmp_path, "s.txt", f"{len(pairs)}\n{x}\n{x}\n" + "\n".join(gens) + "\n")
    out = tmp_path / "certs"
    result = CliRunner().invoke(main, ["si", inst, "--relax-k", "--cert-k", "3", "--brute-threshold", "100",
                                       "--dump-certificates", str(out)])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "ISO"
    dumped = sorted(out.glob("cert_*.txt"))
    assert dumped and dumped[0].read_text().splitlines()[0] in ("FULL", "NON_FULL")
