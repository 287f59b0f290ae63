/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_searchrun_free: (a: number, b: number) => void;
export const benchmark_domain: (a: number, b: number) => [number, number, number, number];
export const benchmark_slice: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const required_samples: (a: number, b: number, c: number) => [number, number, number];
export const run_search_trace: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
export const searchrun_best: (a: number) => [number, number];
export const searchrun_path: (a: number) => [number, number];
export const searchrun_samples: (a: number) => [number, number];
export const searchrun_spent: (a: number) => [number, number];
export const type_two_error_curve: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
