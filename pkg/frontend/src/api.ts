/**
 * Typed client for the diagkit session API.
 *
 * Every shape here mirrors a server response verbatim; the frontend never
 * computes diagnoses, probabilities or partitions on its own.
 */

export interface LeadingDiagnosis {
    components: string[];
    probability: number;
}

export interface SessionState {
    format_version: number;
    session_id: string;
    instance: string;
    engine: string;
    mode: string;
    status: "active" | "done";
    leading: LeadingDiagnosis[];
    final: string[] | null;
    measurement_count: number;
    history: { atom: string; answer: boolean }[];
    skipped: string[];
}

export interface QueryResponse {
    format_version: number;
    session_id: string;
    query_id: number;
    proposition: string;
    partition: { yes: number; no: number; undecided: number };
    leading: LeadingDiagnosis[];
    status: string;
}

export interface EngineInfo {
    id: string;
    description: string;
    claimed_features: Record<string, string>;
}

export interface CreateSessionRequest {
    dpi_text: string;
    engine?: string;
    leading_k?: number;
    mode?: string;
    threshold?: number;
}

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        message: string,
    ) {
        super(message);
        this.name = "ApiError";
    }
}

async function parseError(response: Response): Promise<never> {
    let message = `${response.status} ${response.statusText}`;
    try {
        const body = (await response.json()) as { error?: { message?: string } };
        if (body.error?.message) {
            message = body.error.message;
        }
    } catch {
        // non-JSON error body: keep the status line
    }
    throw new ApiError(response.status, message);
}

export class SessionApiClient {
    constructor(private readonly baseUrl: string = "") {}

    private async getJson<T>(path: string): Promise<T> {
        const response = await fetch(`${this.baseUrl}${path}`);
        if (!response.ok) {
            await parseError(response);
        }
        return (await response.json()) as T;
    }

    private async postJson<T>(path: string, payload: unknown): Promise<T> {
        const response = await fetch(`${this.baseUrl}${path}`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
        if (!response.ok) {
            await parseError(response);
        }
        return (await response.json()) as T;
    }

    async listEngines(): Promise<EngineInfo[]> {
        const payload = await this.getJson<{ engines: EngineInfo[] }>("/api/engines");
        return payload.engines;
    }

    createSession(request: CreateSessionRequest): Promise<SessionState> {
        return this.postJson<SessionState>("/api/sessions", request);
    }

    getState(sessionId: string): Promise<SessionState> {
        return this.getJson<SessionState>(`/api/sessions/${sessionId}`);
    }

    getQuery(sessionId: string): Promise<QueryResponse> {
        return this.getJson<QueryResponse>(`/api/sessions/${sessionId}/query`);
    }

    /** `answer: null` asks the server to skip the atom and re-propose. */
    postAnswer(sessionId: string, queryId: number,
               answer: boolean | null): Promise<SessionState> {
        return this.postJson<SessionState>(
            `/api/sessions/${sessionId}/answer`,
            { query_id: queryId, answer },
        );
    }

    async getTranscript(sessionId: string): Promise<string> {
        const response = await fetch(
            `${this.baseUrl}/api/sessions/${sessionId}/transcript`);
        if (!response.ok) {
            await parseError(response);
        }
        return response.text();
    }
}
