#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Test script to verify the installation and proper functioning
of the magnetic NLS simulator.
"""

import sys
import os
import math
import traceback

# Add root directory to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))


def test_imports():
    """Tests the import of all modules."""
    print("🧪 Testing imports...")

    try:
        from field_grid.grid import make_grid
        from propagators.linear_evolution import apply_us, apply_up
        from observables.observable_series import measure
        from dynamics.nls_evolution import evolve
        from pauli.pauli_extension import evolve_pauli
        from theory.vortex_ring import certify_vortex_ring
        from strichartz.strichartz_lab import verify_identity
        from core.experiment_runner import run
        from persistence.artifact_writer import ArtifactWriter
        from charting.chart_builder import ChartBuilder
        print("✅ All modules imported successfully")
        return True
    except ImportError as e:
        print(f"❌ Import error: {e}")
        return False


def test_dependencies():
    """Tests the availability of dependencies."""
    print("\n📦 Testing dependencies...")

    dependencies = [
        'numpy', 'scipy', 'pandas', 'plotly', 'rich'
    ]

    missing = []
    for dep in dependencies:
        try:
            __import__(dep)
            print(f"✅ {dep}")
        except ImportError:
            print(f"❌ {dep} - MISSING")
            missing.append(dep)

    if missing:
        print(f"\n⚠️  Missing dependencies: {', '.join(missing)}")
        print("Install them with: pip install -r requirements.txt")
        return False

    return True


def test_file_structure():
    """Checks the file structure."""
    print("\n📁 Testing file structure...")

    required_dirs = ['field_grid', 'propagators', 'observables', 'dynamics', 'pauli', 'theory',
                     'strichartz', 'core', 'persistence', 'charting', 'ui', 'logger', 'configs']
    required_files = ['main.py', 'magnls', 'config.py', 'errors.py', 'requirements.txt', 'README.md']

    all_good = True

    for directory in required_dirs:
        if os.path.exists(directory):
            print(f"✅ Directory {directory}/")
        else:
            print(f"❌ Directory {directory}/ - MISSING")
            all_good = False

    for file in required_files:
        if os.path.exists(file):
            print(f"✅ File {file}")
        else:
            print(f"❌ File {file} - MISSING")
            all_good = False

    return all_good


def test_landau_phase():
    """Checks U_S(t) on the lowest Landau state against its exact phase."""
    print("\n🧲 Testing the magnetic propagator...")

    try:
        import numpy as np
        from field_grid.grid import make_grid
        from dynamics.initial_states import landau_state
        from propagators.linear_evolution import apply_us

        grid = make_grid(2, 64, 8.0)
        B, t = 2.0, 0.35
        f = landau_state(grid, B)
        error = float(np.max(np.abs(apply_us(f, t, B).values - np.exp(-1j * B * t) * f.values)))
        print(f"✅ Lowest Landau phase error: {error:.2e}")
        return error < 1e-9
    except Exception as e:
        print(f"❌ Error evolving the Landau state: {e}")
        return False


def run_mini_evolution():
    """Runs a short linear evolution against the closed-form variance."""
    print("\n🚀 Testing mini evolution...")

    try:
        from dynamics.sim_config import load_config
        from dynamics.nls_evolution import evolve
        from observables.series_analysis import variance_sup_gap
        from theory.variance_oracles import VarianceParams, exact_variance

        config = load_config(None, ["mu=0", "dt=0.05", f"t_end={math.pi / 4}", "observable_stride=1",
                                    "initial.center=[0.7, -0.4]", "initial.momentum=[0.5, 0.3]"])
        result = evolve(config)
        first = result.series.first_row()
        params = VarianceParams(first['F_S'], config.B, first['g'], first['gdot'])
        gap = variance_sup_gap(result.series, lambda t: exact_variance(params, t))

        print(f"✅ Mini evolution successful!")
        print(f"   Rows: {len(result.series)}")
        print(f"   Variance gap: {gap:.2e}")
        return gap < 1e-7

    except Exception as e:
        print(f"❌ Error during mini evolution: {e}")
        traceback.print_exc()
        return False


def main():
    """Main test function."""
    print("=" * 60)
    print("🧪 Magnetic NLS Lab - VALIDATION TESTS")
    print("=" * 60)

    tests = [
        ("Imports", test_imports),
        ("Dependencies", test_dependencies),
        ("File structure", test_file_structure),
        ("Landau phase", test_landau_phase),
        ("Mini evolution", run_mini_evolution),
    ]

    passed = 0
    total = len(tests)

    for test_name, test_func in tests:
        try:
            if test_func():
                passed += 1
        except Exception as e:
            print(f"❌ {test_name} - CRITICAL ERROR: {e}")

    print("\n" + "=" * 60)
    print(f"📊 RESULTS: {passed}/{total} tests passed")

    if passed == total:
        print("🎉 All tests passed! The simulator is ready.")
        print("\n💡 To run an experiment:")
        print("   ./magnls evolve --config configs/linear_larmor.json --out results/larmor")
    else:
        print("⚠️  Some tests failed. Check the errors above.")
        print("\n🔧 Recommended actions:")
        print("   1. Install dependencies: pip install -r requirements.txt")
        print("   2. Check file structure")
        print("   3. Run tests again: python check_app_setup.py")

    print("=" * 60)
    return 0 if passed == total else 1


if __name__ == "__main__":
    sys.exit(main())
