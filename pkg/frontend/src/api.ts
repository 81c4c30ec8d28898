/** HTTP client for the translation service.
 *
 * Keeps a single in-flight translate request: a new submission aborts and
 * replaces the previous one.
 */

import { canonicalJson } from "./constraints.js";
import type { ResourcesInfo, TranslateResponse, WireConstraints } from "./types.js";

export interface TranslateOutcome {
    ok: boolean;
    status: number;
    body: TranslateResponse | { error: string };
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    private inflight: AbortController | null = null;

    constructor(
        private readonly baseUrl: string,
        private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    ) {}

    async translate(text: string, constraints: WireConstraints): Promise<TranslateOutcome> {
        this.inflight?.abort();
        const controller = new AbortController();
        this.inflight = controller;
        const body = canonicalJson({ constraints, text });
        const response = await this.fetchImpl(`${this.baseUrl}/v1/translate`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body,
            signal: controller.signal,
        });
        if (this.inflight === controller) {
            this.inflight = null;
        }
        return { ok: response.ok, status: response.status, body: await response.json() };
    }

    async info(): Promise<ResourcesInfo> {
        const response = await this.fetchImpl(`${this.baseUrl}/v1/resources/info`);
        return (await response.json()) as ResourcesInfo;
    }
}
