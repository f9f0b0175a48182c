"""Figure files for the scenario outputs (``--plot``)."""
from __future__ import annotations

import pandas as pd
from matplotlib.figure import Figure

from .analysis import CLASSICAL_BOUND
from .results import ResultWriter


def plot_freq_sweep(table: pd.DataFrame, dense: pd.DataFrame, writer: ResultWriter, name: str = 'freq_sweep') -> None:
    fig = Figure()
    ax = fig.subplots()
    ax.plot(dense['output_nm'], dense['g2'], label='analytic')
    if table['g2_mc'].notna().any():
        ax.errorbar(table['output_center_nm'], table['g2_mc'], yerr=table['g2_mc_err'], fmt='o', label='Monte Carlo')
    else:
        ax.plot(table['output_center_nm'], table['g2_analytic'], 'o', label='scan points')
    ax.axhline(CLASSICAL_BOUND, color='grey', linestyle='--', label='classical bound')

    ax.set_xlabel('Output wavelength (nm)')
    ax.set_ylabel('g2 (signal, herald)')
    ax.set_title('Cross-correlation against output wavelength')
    ax.legend()
    writer.save_figure(fig, name)


def plot_delay_scan(table: pd.DataFrame, writer: ResultWriter, name: str = 'delay_scan') -> None:
    fig = Figure()
    ax = fig.subplots()
    ax.plot(table['delay_ps'], table['counts'], 'o', label='coincidences - accidentals')
    ax.plot(table['delay_ps'], table['noise'], 's', label='accidentals')
    ax.plot(table['delay_ps'], table['fit'], '-', label='exponential fit')

    ax.set_xlabel('Read-write delay (ps)')
    ax.set_ylabel('Counts')
    ax.set_title('Storage decay')
    ax.legend()
    writer.save_figure(fig, name)


def plot_spectra(table: pd.DataFrame, writer: ResultWriter, name: str) -> None:
    fig = Figure()
    ax = fig.subplots()
    for column in ('input_convolved', 'read_shifted_convolved', 'output_convolved'):
        ax.plot(table['wavelength_nm'], table[column], label=column.replace('_convolved', '').replace('_', ' '))

    visible = table['wavelength_nm'][table['output_convolved'] > 1e-3 * table['output_convolved'].max()]
    ax.set_xlim(float(visible.min()) - 10.0, float(visible.max()) + 10.0)
    ax.set_xlabel('Wavelength (nm)')
    ax.set_ylabel('Intensity (1/nm)')
    ax.set_title('Measured spectra')
    ax.legend()
    writer.save_figure(fig, name)


def plot_histogram(table: pd.DataFrame, writer: ResultWriter, name: str = 'histogram') -> None:
    fig = Figure()
    ax = fig.subplots()
    ax.bar(table['bin_offset_ns'], table['counts'], width=6.0)

    ax.set_xlabel('Signal-herald delay (ns)')
    ax.set_ylabel('Coincidences')
    ax.set_title('Coincidence histogram')
    writer.save_figure(fig, name)


def plot_dip_scan(table: pd.DataFrame, writer: ResultWriter, name: str = 'dip_scan') -> None:
    fig = Figure()
    ax = fig.subplots()
    ax.plot(table['delay_fs'], table['relative_rate'], 'o', label='input-herald rate')
    ax.plot(table['delay_fs'], table['fit'], '-', label='Gaussian fit')

    ax.set_xlabel('Input-write delay (fs)')
    ax.set_ylabel('Relative coincidence rate')
    ax.set_title('Absorption dip')
    ax.legend()
    writer.save_figure(fig, name)
