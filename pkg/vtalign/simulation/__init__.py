"""
Simulation package
Synthetic scenes and ground-truth visual/thermal pairs for testing and benchmarks
"""
from vtalign.simulation.synthetic import gamma_remap, structured_scene, synth_pair

__all__ = ['gamma_remap', 'structured_scene', 'synth_pair']
