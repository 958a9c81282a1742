"""Network contracts: shapes, determinism, composition oracles, ablations."""

import numpy as np
import pytest
import torch
import torch.nn.functional as F

from scribsal.errors import ParameterError
from scribsal.net import (ABLATION_LATTICE, DenseAggregation, EdgeAuxiliaryUnit,
                          JointAttentionUnit, NetworkConfig, PyramidEncoder, BoundaryAwareSaliencyNet,
                          ablation_config, canny_edges, count_parameters,
                          toy_network_config)


class TestEncoder:
    def test_pyramid_shapes_352(self):
        enc = PyramidEncoder()
        enc.eval()
        with torch.no_grad():
            feats = enc(torch.rand(1, 3, 352, 352))
        sizes = [f.shape[-1] for f in feats]
        chans = [f.shape[1] for f in feats]
        assert sizes == [352, 176, 88, 44, 22]
        assert chans == [64, 128, 256, 512, 512]

    @pytest.mark.parametrize("size", [64, 128])
    def test_pyramid_shapes_parametrized(self, size):
        enc = PyramidEncoder(widths=(8, 8, 8, 8, 8), convs=(1, 1, 1, 1, 1))
        with torch.no_grad():
            feats = enc(torch.rand(1, 3, size, size))
        assert [f.shape[-1] for f in feats] == [size, size // 2, size // 4,
                                                size // 8, size // 16]

    def test_indivisible_size_rejected(self):
        enc = PyramidEncoder(widths=(4, 4, 4, 4, 4), convs=(1, 1, 1, 1, 1))
        with pytest.raises(ValueError, match="divisible by 16"):
            enc(torch.rand(1, 3, 50, 50))

    def test_zero_image_zero_bias_gives_zero_pyramid(self):
        enc = PyramidEncoder(widths=(4, 4, 4, 4, 4), convs=(1, 1, 1, 1, 1))
        for m in enc.modules():
            if isinstance(m, torch.nn.Conv2d):
                torch.nn.init.zeros_(m.bias)
        with torch.no_grad():
            feats = enc(torch.zeros(1, 3, 32, 32))
        for f in feats:
            assert (f == 0).all()

    def test_deterministic(self):
        enc = PyramidEncoder(widths=(4, 4, 4, 4, 4), convs=(1, 1, 1, 1, 1))
        enc.eval()
        x = torch.rand(1, 3, 32, 32)
        with torch.no_grad():
            a = enc(x)
            b = enc(x)
        for fa, fb in zip(a, b):
            assert torch.equal(fa, fb)


def crb_reference(m, x):
    y = F.conv2d(x, m.conv.weight, m.conv.bias, padding=m.conv.padding)
    y = torch.relu(y)
    return F.batch_norm(y, m.bn.running_mean, m.bn.running_var, m.bn.weight,
                        m.bn.bias, training=False, eps=m.bn.eps)


def cab_reference(m, f):
    def mlp(v):
        return F.conv2d(torch.relu(F.conv2d(v, m.mlp[0].weight)), m.mlp[2].weight)

    avg = f.mean(dim=(2, 3), keepdim=True)
    mx = f.amax(dim=(2, 3), keepdim=True)
    return torch.sigmoid(mlp(avg) + mlp(mx))


def sab_reference(m, f):
    stacked = torch.cat([f.amax(dim=1, keepdim=True), f.mean(dim=1, keepdim=True)], dim=1)
    return torch.sigmoid(F.conv2d(stacked, m.conv.weight, padding=3))


class TestJointAttentionComposition:
    def test_joint_unit_matches_stepwise_recomputation(self):
        torch.manual_seed(0)
        jau = JointAttentionUnit(16, 8)
        jau.eval()
        x = torch.randn(2, 16, 8, 8)
        with torch.no_grad():
            got = jau(x)
            f = crb_reference(jau.crb, x)
            want = cab_reference(jau.cab, f) * f + sab_reference(jau.sab, f) * f
        assert got.shape == (2, 8, 8, 8)
        assert torch.allclose(got, want, atol=1e-6)

    def test_attention_gates_bounded(self):
        torch.manual_seed(1)
        jau = JointAttentionUnit(8, 8)
        jau.eval()
        x = torch.randn(1, 8, 6, 6) * 3
        with torch.no_grad():
            f = jau.crb(x)
            cab = jau.cab(f)
            sab = jau.sab(f)
        assert (cab > 0).all() and (cab < 1).all()
        assert (sab > 0).all() and (sab < 1).all()

    def test_saturated_attention_doubles_features(self):
        torch.manual_seed(2)
        jau = JointAttentionUnit(4, 4)
        jau.eval()
        x = torch.randn(1, 4, 5, 5)
        with torch.no_grad():
            f = jau.crb(x)
            # with both gates pinned at 1 the unit reduces to 2 * f
            want = 1.0 * f + 1.0 * f
        assert torch.allclose(want, 2 * f)


class TestDenseAggregationComposition:
    def test_shapes(self):
        das = DenseAggregation(256, 512, 512, width=64)
        das.eval()
        f3, f4, f5 = torch.rand(1, 256, 88, 88), torch.rand(1, 512, 44, 44), torch.rand(1, 512, 22, 22)
        with torch.no_grad():
            fs = das(f3, f4, f5)
        assert fs.shape == (1, 1, 88, 88)

    def test_zero_f5_zero_bias_gates_line1_to_zero(self):
        das = DenseAggregation(8, 8, 8, width=4)
        torch.nn.init.zeros_(das.reduce5.bias)
        torch.nn.init.zeros_(das.gate54.bias)
        das.eval()
        with torch.no_grad():
            r5 = das.reduce5(torch.zeros(1, 8, 4, 4))
            gated = das.gate54(F.interpolate(r5, scale_factor=2, mode="bilinear",
                                             align_corners=False))
            f1 = gated * das.reduce4(torch.rand(1, 8, 8, 8))
        assert (f1 == 0).all()

    def test_matches_linewise_recomputation(self):
        torch.manual_seed(3)
        das = DenseAggregation(12, 16, 20, width=8)
        das.eval()
        f3 = torch.randn(1, 12, 16, 16)
        f4 = torch.randn(1, 16, 8, 8)
        f5 = torch.randn(1, 20, 4, 4)

        def conv(layer, x):
            return F.conv2d(x, layer.weight, layer.bias, padding=layer.padding)

        def up(x, n):
            return F.interpolate(x, scale_factor=n, mode="bilinear", align_corners=False)

        with torch.no_grad():
            got = das(f3, f4, f5)
            r3, r4, r5 = conv(das.reduce3, f3), conv(das.reduce4, f4), conv(das.reduce5, f5)
            line1 = conv(das.gate54, up(r5, 2)) * r4
            line2 = conv(das.fuse12, torch.cat([line1, conv(das.inner5, up(r5, 2))], 1))
            line3 = conv(das.gate53, up(r5, 4)) * conv(das.gate43, up(r4, 2)) * r3
            want = conv(das.out, torch.cat([line3, conv(das.inner2, up(line2, 2))], 1))
        assert torch.allclose(got, want, atol=1e-6)


class TestEdgeAuxiliary:
    def test_output_resolution(self):
        eau = EdgeAuxiliaryUnit(branch_width=4, out_width=6)
        eau.eval()
        with torch.no_grad():
            out = eau(torch.rand(1, 3, 64, 64))
        assert out.shape == (1, 6, 64, 64)

    def test_constant_image_has_zero_canny_channel(self):
        eau = EdgeAuxiliaryUnit(branch_width=2, out_width=2)
        edge = eau.compute_edge_map(torch.full((1, 3, 32, 32), 0.5))
        assert (edge == 0).all()

    def test_step_edge_canny_channel_matches_detector(self):
        image = np.zeros((32, 32, 3), dtype=np.float32)
        image[:, 16:] = 1.0
        eau = EdgeAuxiliaryUnit()
        x = torch.from_numpy(image.transpose(2, 0, 1)).unsqueeze(0)
        edge = eau.compute_edge_map(x)[0, 0].numpy()
        want = canny_edges(image, low=eau.canny.low, high=eau.canny.high,
                           sigma=eau.canny.sigma)
        np.testing.assert_array_equal(edge.astype(np.uint8), want)


class TestBoundaryComposition:
    def test_bam_matches_stepwise_recomputation(self):
        torch.manual_seed(4)
        cfg = toy_network_config()
        model = BoundaryAwareSaliencyNet(cfg)
        model.eval()
        x = torch.rand(1, 3, 32, 32)
        bam = model.bam
        edge = bam.eau.compute_edge_map(x)
        with torch.no_grad():
            got = bam(model.encoder((x - model.mean) / model.std)[0],
                      model.encoder((x - model.mean) / model.std)[1], x, edge_map=edge)
            pyr = model.encoder((x - model.mean) / model.std)
            e1 = bam.unit1(pyr[0])
            e2 = F.interpolate(bam.unit2(pyr[1]), scale_factor=2, mode="bilinear",
                               align_corners=False)
            v = crb_reference(bam.eau.vertical, x)
            hch = crb_reference(bam.eau.horizontal, x)
            fa = F.conv2d(torch.cat([v, hch, edge], 1), bam.eau.fuse.weight,
                          bam.eau.fuse.bias)
            want = torch.sigmoid(F.conv2d(torch.cat([e1, e2, fa], 1),
                                          bam.fuse.weight, bam.fuse.bias, padding=1))
        assert got.shape == (1, 1, 32, 32)
        assert (got > 0).all() and (got < 1).all()
        assert torch.allclose(got, want, atol=1e-6)


class TestFullModel:
    def test_output_contracts(self):
        torch.manual_seed(5)
        model = BoundaryAwareSaliencyNet(toy_network_config())
        model.eval()
        x = torch.rand(2, 3, 64, 64)
        with torch.no_grad():
            sal, bdry = model(x)
        assert sal.shape == (2, 1, 64, 64)
        assert bdry.shape == (2, 1, 64, 64)
        assert sal.min() >= 0 and sal.max() <= 1
        assert (bdry > 0).all() and (bdry < 1).all()

    def test_deterministic_inference(self):
        model = BoundaryAwareSaliencyNet(toy_network_config())
        model.eval()
        x = torch.rand(1, 3, 32, 32)
        with torch.no_grad():
            a = model(x)[0]
            b = model(x)[0]
        assert torch.equal(a, b)

    def test_toy_parameter_budget(self):
        assert count_parameters(BoundaryAwareSaliencyNet(toy_network_config())) <= 10_000


class TestAblations:
    def test_lattice_configs_instantiate_with_distinct_param_counts(self):
        base = toy_network_config()
        counts = []
        for row in ABLATION_LATTICE:
            cfg = ablation_config(base, **row)
            counts.append(count_parameters(BoundaryAwareSaliencyNet(cfg)))
        assert len(set(counts)) == len(counts)

    def test_parameter_ordering_full_gt_noeau_gt_sc(self):
        base = toy_network_config()
        full = count_parameters(BoundaryAwareSaliencyNet(ablation_config(base, das=True, edge_mode="jau", eau=True)))
        no_eau = count_parameters(BoundaryAwareSaliencyNet(ablation_config(base, das=True, edge_mode="jau", eau=False)))
        sc = count_parameters(BoundaryAwareSaliencyNet(ablation_config(base, das=True, edge_mode="sc", eau=False)))
        assert full > no_eau > sc

    def test_disabled_branches_forward(self):
        base = toy_network_config()
        x = torch.rand(1, 3, 32, 32)
        for row in ABLATION_LATTICE:
            model = BoundaryAwareSaliencyNet(ablation_config(base, **row))
            model.eval()
            with torch.no_grad():
                sal, bdry = model(x)
            assert sal.shape == (1, 1, 32, 32)
            assert (bdry is None) == (row["edge_mode"] == "off")

    def test_eau_without_branch_rejected(self):
        with pytest.raises(ParameterError):
            NetworkConfig(edge_mode="off", eau=True).validate()


class TestGradientsSpotCheck:
    def test_parameter_subset_matches_finite_differences(self):
        torch.manual_seed(6)
        model = BoundaryAwareSaliencyNet(toy_network_config()).double()
        model.eval()
        # move off the freshly-initialized point: zero BN biases make relu-clamped
        # channels tie exactly at 0, where amax is genuinely non-differentiable
        with torch.no_grad():
            gen = torch.Generator().manual_seed(99)
            for p in model.parameters():
                p.add_(torch.empty_like(p).uniform_(-0.05, 0.05, generator=gen))
        x = torch.rand(1, 3, 32, 32, dtype=torch.float64)
        edge = model.bam.eau.compute_edge_map(x)
        w_s = torch.randn(1, 1, 32, 32, dtype=torch.float64)
        w_b = torch.randn(1, 1, 32, 32, dtype=torch.float64)

        def scalar():
            sal, bdry = model(x, edge_map=edge)
            return (sal * w_s).sum() + (bdry * w_b).sum()

        loss = scalar()
        loss.backward()
        rng = np.random.default_rng(0)
        h = 1e-6
        checked = 0
        for name, param in model.named_parameters():
            flat = param.data.view(-1)
            gflat = param.grad.view(-1)
            for idx in rng.choice(flat.numel(), size=min(3, flat.numel()), replace=False):
                orig = flat[idx].item()
                flat[idx] = orig + h
                with torch.no_grad():
                    up = scalar().item()
                flat[idx] = orig - h
                with torch.no_grad():
                    down = scalar().item()
                flat[idx] = orig
                fd = (up - down) / (2 * h)
                an = gflat[idx].item()
                assert abs(fd - an) / max(abs(fd), abs(an), 1e-4) < 1e-3, \
                    f"{name}[{idx}]: analytic {an} vs fd {fd}"
                checked += 1
        assert checked > 50
