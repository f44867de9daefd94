import io
import json

import pytest

from superhedge.config import config
from superhedge.exceptions import ParseError, TreeStructureError, ValidationError
from superhedge.schemas import OnePeriodModelFile, TreeModelFile
from superhedge.services import ModelLoader

BINOMIAL = {
    "schema": 1,
    "kind": "one_period",
    "d": 1,
    "y": [100],
    "atoms": [{"Y": [80], "label": "down", "claim": 0}, {"Y": [120], "label": "up", "claim": 20}],
    "priors": [[0.5, 0.5]],
}

TREE = {
    "schema": 1,
    "kind": "tree",
    "horizon": 1,
    "nodes": [
        {"id": 0, "depth": 0, "price": [100], "children": [1, 2], "child_priors": [[0.5, 0.5]]},
        {"id": 1, "depth": 1, "price": [80]},
        {"id": 2, "depth": 1, "price": [120]},
    ],
    "terminal_payoff": {"1": 0.0, "2": 20.0},
}


def dumps(data):
    return json.dumps(data)


class TestParse:
    def test_one_period(self, loader):
        model = loader.parse(dumps(BINOMIAL))
        assert isinstance(model, OnePeriodModelFile)
        market = loader.build_market(model)
        assert market.y == (100.0,)
        assert market.Y.values == ((80.0,), (120.0,))

    def test_scalar_prices_are_lifted(self, loader):
        data = dict(BINOMIAL, y=100, atoms=[{"Y": 80}, {"Y": 120}])
        assert loader.parse(dumps(data)).y == [100.0]

    def test_tree(self, loader):
        model = loader.parse(dumps(TREE))
        assert isinstance(model, TreeModelFile)
        tree = loader.build_tree(model)
        assert tree.nodes[0].children == (1, 2)
        assert loader.terminal_payoff(model, tree) == {1: 0.0, 2: 20.0}

    @pytest.mark.parametrize("text", ['{"y": NaN}', '{"y": Infinity}', '{"y": -Infinity}'])
    def test_non_finite_numbers(self, loader, text):
        with pytest.raises(ParseError) as exc:
            loader.parse(text)
        assert exc.value.error_code == "non_finite"
        assert exc.value.exit_code == 2

    def test_malformed_json(self, loader):
        with pytest.raises(ParseError) as exc:
            loader.parse('{"schema": 1,')
        assert exc.value.error_code == "invalid_json"

    @pytest.mark.parametrize("change", [
        {"schema": 2},
        {"kind": "swaption"},
        {"d": 0},
        {"extra": True},
        {"payoff": {"type": "call"}},
        {"payoff": {"type": "call", "strike": -1}},
    ])
    def test_schema_violations(self, loader, change):
        with pytest.raises(ParseError) as exc:
            loader.parse(dumps({**BINOMIAL, **change}))
        assert exc.value.error_code == "schema_violation"

    def test_weights_above_one_need_normalize(self, loader):
        data = dict(BINOMIAL, priors=[[1, 3]])
        with pytest.raises(ParseError):
            loader.parse(dumps(data))
        normalizing = ModelLoader(normalize=True)
        market = normalizing.build_market(normalizing.parse(dumps(data)))
        assert market.priors.priors[0].weights == (0.25, 0.75)

    def test_unnormalized_weights_fail_without_flag(self, loader):
        model = loader.parse(dumps(dict(BINOMIAL, priors=[[0.5, 0.4]])))
        with pytest.raises(ValidationError) as exc:
            loader.build_market(model)
        assert exc.value.error_code == "invalid_measure"

    def test_duplicate_node_ids(self, loader):
        data = dict(TREE, nodes=TREE["nodes"] + [{"id": 2, "depth": 1, "price": [90]}])
        with pytest.raises(TreeStructureError):
            loader.build_tree(loader.parse(dumps(data)))

    def test_round_trip(self, loader):
        data = dict(BINOMIAL, y=[0.1 + 0.2], priors=[[1 / 3, 2 / 3]])
        model = loader.parse(dumps(data))
        assert loader.parse(loader.dump(model)) == model
        tree = loader.parse(dumps(TREE))
        assert loader.parse(loader.dump(tree)) == tree


class TestRead:
    def test_missing_file(self, loader, tmp_path):
        with pytest.raises(ParseError) as exc:
            loader.read(str(tmp_path / "missing.json"))
        assert exc.value.error_code == "unreadable"

    def test_file(self, loader, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(dumps(BINOMIAL))
        assert loader.read(str(path)).kind == "one_period"

    def test_stdin(self, loader, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(dumps(TREE)))
        assert loader.read("-").kind == "tree"


class TestPayoffs:
    def test_option_grammar(self):
        spec = ModelLoader.parse_payoff_option("call:100")
        assert (spec.type, spec.strike, spec.asset) == ("call", 100.0, 0)
        spec = ModelLoader.parse_payoff_option("put:90@1")
        assert (spec.type, spec.strike, spec.asset) == ("put", 90.0, 1)
        assert ModelLoader.parse_payoff_option("linear:1,-2.5").coeffs == [1.0, -2.5]

    @pytest.mark.parametrize("text", ["swap:1", "call:abc", "call:-1", "linear:", "call"])
    def test_invalid_options(self, text):
        with pytest.raises(ParseError):
            ModelLoader.parse_payoff_option(text)

    def test_payoff_functions(self):
        call = ModelLoader.payoff_function(ModelLoader.parse_payoff_option("call:100@1"), 2)
        assert call((0.0, 130.0)) == 30.0
        put = ModelLoader.payoff_function(ModelLoader.parse_payoff_option("put:100"), 1)
        assert put((80.0,)) == 20.0
        linear = ModelLoader.payoff_function(ModelLoader.parse_payoff_option("linear:1,2"), 2)
        assert linear((3.0, 4.0)) == 11.0

    def test_payoff_dimension(self):
        with pytest.raises(ValidationError):
            ModelLoader.payoff_function(ModelLoader.parse_payoff_option("call:100@1"), 1)
        with pytest.raises(ValidationError):
            ModelLoader.payoff_function(ModelLoader.parse_payoff_option("linear:1,2"), 1)

    def test_claim_precedence(self, loader):
        data = dict(BINOMIAL, payoff={"type": "put", "strike": 100})
        model = loader.parse(dumps(data))
        market = loader.build_market(model)
        option = ModelLoader.parse_payoff_option("call:100")
        assert dict(loader.build_claim(model, market, option).payoff_on_support)[(120.0,)] == 20.0
        assert dict(loader.build_claim(model, market).payoff_on_support)[(80.0,)] == 20.0
        plain = loader.parse(dumps(BINOMIAL))
        assert loader.build_claim(plain, loader.build_market(plain)).per_atom == (0.0, 20.0)

    def test_missing_claim(self, loader):
        data = dict(BINOMIAL, atoms=[{"Y": [80]}, {"Y": [120], "claim": 1}])
        model = loader.parse(dumps(data))
        with pytest.raises(ValidationError) as exc:
            loader.build_claim(model, loader.build_market(model))
        assert exc.value.error_code == "claim_mismatch"

    def test_table_payoff(self, loader):
        table = [{"point": [80], "value": 1.0}, {"point": [120], "value": 5.0}]
        model = loader.parse(dumps(dict(BINOMIAL, payoff={"type": "table", "table": table})))
        claim = loader.build_claim(model, loader.build_market(model))
        assert claim.payoff_on_support == (((80.0,), 1.0), ((120.0,), 5.0))

    def test_tree_payoff_option(self, loader):
        model = loader.parse(dumps(TREE))
        tree = loader.build_tree(model)
        payoff = loader.terminal_payoff(model, tree, ModelLoader.parse_payoff_option("put:100"))
        assert payoff == {1: 20.0, 2: 0.0}


class TestWeightRows:
    def test_empty_prior_row(self, loader):
        with pytest.raises(ParseError) as exc:
            loader.parse(dumps(dict(BINOMIAL, priors=[[]])))
        assert exc.value.error_code == "schema_violation"
        assert exc.value.exit_code == 2

    @pytest.mark.parametrize("child_priors", [[[]], []])
    def test_empty_child_priors(self, loader, child_priors):
        root = dict(TREE["nodes"][0], child_priors=child_priors)
        with pytest.raises(ParseError) as exc:
            loader.parse(dumps(dict(TREE, nodes=[root] + TREE["nodes"][1:])))
        assert exc.value.error_code == "schema_violation"

    def test_weight_ceiling_comes_from_config(self, loader, monkeypatch):
        data = dumps(dict(BINOMIAL, priors=[[1.0000000005, 0.0]]))
        assert loader.parse(data).priors == [[1.0000000005, 0.0]]
        monkeypatch.setattr(config, "WEIGHT_CEILING", 1.0)
        with pytest.raises(ParseError):
            loader.parse(data)
