/* tslint:disable */
/* eslint-disable */

/**
 * One random local search run, flattened for plotting.
 */
export class SearchRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Noiseless value of the incumbent after each comparison.
     */
    readonly best: Float64Array;
    /**
     * First two incumbent coordinates after each comparison, interleaved.
     */
    readonly path: Float64Array;
    /**
     * Samples per configuration used by each comparison.
     */
    readonly samples: Float64Array;
    /**
     * Evaluations spent after each comparison (first entry is the start).
     */
    readonly spent: Float64Array;
}

/**
 * Domain bounds `[lo, hi]` of a benchmark.
 */
export function benchmark_domain(_function: string): Float64Array;

/**
 * Noiseless values on a `resolution` x `resolution` grid over the first two
 * coordinates, the rest held at the minimizer. Row-major, y outermost.
 */
export function benchmark_slice(_function: string, dimension: number, resolution: number): Float64Array;

/**
 * Smallest paired sample size meeting both error requirements.
 */
export function required_samples(delta_norm: number, alpha: number, beta: number): number;

/**
 * Runs one search. `policy` uses the config-file syntax, e.g.
 * `reactive alpha=0.1 beta=0.4 delta=0.01` or `fixed n=2`.
 */
export function run_search_trace(_function: string, dimension: number, noise: number, policy: string, step: number, budget: number, seed: number): SearchRun;

/**
 * Approximate type-II error for paired sample sizes `2..=n_max`.
 */
export function type_two_error_curve(delta_norm: number, alpha: number, n_max: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_searchrun_free: (a: number, b: number) => void;
    readonly benchmark_domain: (a: number, b: number) => [number, number, number, number];
    readonly benchmark_slice: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly required_samples: (a: number, b: number, c: number) => [number, number, number];
    readonly run_search_trace: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
    readonly searchrun_best: (a: number) => [number, number];
    readonly searchrun_path: (a: number) => [number, number];
    readonly searchrun_samples: (a: number) => [number, number];
    readonly searchrun_spent: (a: number) => [number, number];
    readonly type_two_error_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
