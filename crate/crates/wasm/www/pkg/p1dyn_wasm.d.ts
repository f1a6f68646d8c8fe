/* tslint:disable */
/* eslint-disable */

/**
 * Automorphism group of `map` (a rational function of `z`) over GF(q)
 * and its extensions.
 */
export function aut(map: string, q: number): string;

/**
 * Runs a construction. `params` is whitespace-separated `key=value`
 * pairs, e.g. `p=7 n=4` or `q=3 a=1`.
 */
export function construct(kind: string, params: string): string;

/**
 * Locus verdict for `(σ1, σ2)` mod `p`, or for a quadratic map when `map`
 * is nonempty.
 */
export function locus(p: number, sigma1: string, sigma2: string, map: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly aut: (a: number, b: number, c: number) => [number, number];
    readonly construct: (a: number, b: number, c: number, d: number) => [number, number];
    readonly locus: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
