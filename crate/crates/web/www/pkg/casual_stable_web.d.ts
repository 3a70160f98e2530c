/* tslint:disable */
/* eslint-disable */

/**
 * Relative frequencies of per-author citations `0..=k_max` in one simulated
 * field, followed by the share above `k_max`.
 */
export function citation_histogram(lambda: number, p: number, q: number, seed: bigint, k_max: number): Float64Array;

/**
 * Sup distance between the normalized exponential sum and the Gamma(b, γ)
 * target for `n = 1, 2, 4, ..., 2^(doublings-1)`.
 */
export function convergence_distances(b: number, gamma: number, doublings: number): Float64Array;

/**
 * Probabilities of `0..=n_max` for a discrete stable family.
 *
 * `family` is `"svh"`, `"ex1"` or `"ex2"`; `index` is α for `svh` and γ
 * otherwise. `kappa` and `m` apply to `ex1`, `b` to `ex2`.
 */
export function pmf_curve(family: string, lambda: number, index: number, kappa: number, m: number, b: number, n_max: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly citation_histogram: (a: number, b: number, c: number, d: bigint, e: number) => [number, number, number, number];
    readonly convergence_distances: (a: number, b: number, c: number) => [number, number, number, number];
    readonly pmf_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
