/**
 * Interactive sequential-diagnosis screens.
 *
 * The human plays the measurement oracle: the session screen shows the
 * pending query with a partition preview, and Yes / No / Can't-measure
 * controls post the answer to the service. One session is active per tab;
 * a 409 from the server (superseded query) surfaces as a non-destructive
 * refresh prompt rather than an error page.
 */

import { ApiError, SessionApiClient } from "./api.js";
import type { QueryResponse, SessionState } from "./api.js";
import {
    diagnosisBars,
    historyTimeline,
    partitionPreview,
    queryPrompt,
    statusBanner,
} from "./view.js";

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, className?: string, text?: string): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) {
        node.className = className;
    }
    if (text !== undefined) {
        node.textContent = text;
    }
    return node;
}

export class SessionScreen {
    private state: SessionState | null = null;
    private query: QueryResponse | null = null;
    private conflictNotice = false;
    private errorText: string | null = null;

    constructor(
        private readonly root: HTMLElement,
        private readonly client: SessionApiClient,
        private readonly sessionId: string,
    ) {}

    /** Pull state (and the pending query while active), then render. */
    async refresh(): Promise<void> {
        this.conflictNotice = false;
        this.errorText = null;
        try {
            this.state = await this.client.getState(this.sessionId);
            this.query = this.state.status === "active"
                ? await this.client.getQuery(this.sessionId)
                : null;
        } catch (error) {
            this.errorText = error instanceof Error
                ? error.message
                : "the session service is unreachable";
            this.query = null;
        }
        this.render();
    }

    async answer(value: boolean | null): Promise<void> {
        if (!this.query) {
            return;
        }
        try {
            this.state = await this.client.postAnswer(
                this.sessionId, this.query.query_id, value);
            this.query = this.state.status === "active"
                ? await this.client.getQuery(this.sessionId)
                : null;
        } catch (error) {
            if (error instanceof ApiError && error.status === 409) {
                // Someone answered ahead of us: keep everything on screen and
                // offer a refresh instead of destroying the session view.
                this.conflictNotice = true;
            } else {
                this.errorText = error instanceof Error
                    ? error.message
                    : "the session service is unreachable";
            }
        }
        this.render();
    }

    /** Fetch the transcript and offer it as a download link. */
    async exportTranscript(): Promise<void> {
        const text = await this.client.getTranscript(this.sessionId);
        const anchor = el("a", "transcript-download", "Download transcript");
        anchor.setAttribute("download", `${this.sessionId}-transcript.jsonl`);
        anchor.setAttribute(
            "href", `data:application/jsonl;charset=utf-8,${encodeURIComponent(text)}`);
        anchor.dataset["transcript"] = text;
        this.root.querySelector(".final")?.appendChild(anchor);
    }

    render(): void {
        this.root.textContent = "";
        if (this.errorText !== null) {
            const banner = el("div", "banner banner-error", this.errorText);
            const retry = el("button", "retry", "Start over / reconnect");
            retry.addEventListener("click", () => void this.refresh());
            banner.appendChild(retry);
            this.root.appendChild(banner);
            if (this.state === null) {
                return;
            }
        }
        if (this.state === null) {
            this.root.appendChild(el("p", "loading", "Loading session..."));
            return;
        }

        this.root.appendChild(el("div", "banner banner-status",
                                 statusBanner(this.state)));

        if (this.conflictNotice) {
            const notice = el("div", "banner banner-conflict",
                              "This query has been superseded. Refresh to see "
                              + "the current one; nothing was lost.");
            const refresh = el("button", "refresh", "Refresh");
            refresh.addEventListener("click", () => void this.refresh());
            notice.appendChild(refresh);
            this.root.appendChild(notice);
        }

        const bars = el("ul", "diagnoses");
        for (const bar of diagnosisBars(this.state.leading)) {
            const item = el("li", "diagnosis");
            const fill = el("span", "bar");
            fill.style.width = `${bar.percent}%`;
            item.appendChild(fill);
            item.appendChild(el("span", "label", bar.label));
            item.appendChild(el("span", "prob", bar.probabilityText));
            bars.appendChild(item);
        }
        this.root.appendChild(bars);

        if (this.state.status === "done" && this.state.final !== null) {
            const done = el("div", "final");
            done.appendChild(el("h2", "final-label",
                                `{${this.state.final.join(", ")}}`));
            const exportButton = el("button", "export", "Export transcript");
            exportButton.addEventListener("click", () => void this.exportTranscript());
            done.appendChild(exportButton);
            this.root.appendChild(done);
        } else if (this.query !== null) {
            const panel = el("div", "query");
            panel.appendChild(el("p", "prompt", queryPrompt(this.query)));
            const preview = partitionPreview(this.query);
            panel.appendChild(el("p", "preview",
                `yes rules out ${preview.eliminatedIfYes}, ` +
                `no rules out ${preview.eliminatedIfNo}` +
                (preview.undecided ? `, ${preview.undecided} unaffected` : "")));
            const yes = el("button", "answer-yes", "Yes");
            yes.addEventListener("click", () => void this.answer(true));
            const no = el("button", "answer-no", "No");
            no.addEventListener("click", () => void this.answer(false));
            const skip = el("button", "answer-skip", "Can't measure");
            skip.addEventListener("click", () => void this.answer(null));
            panel.append(yes, no, skip);
            this.root.appendChild(panel);
        }

        const timeline = el("ol", "history");
        for (const entry of historyTimeline(this.state)) {
            timeline.appendChild(el("li", "history-entry",
                                    `${entry.atom} = ${entry.answerText}`));
        }
        this.root.appendChild(timeline);
    }
}

export class UploadScreen {
    private engines: string[] = [];
    private errorText: string | null = null;

    constructor(
        private readonly root: HTMLElement,
        private readonly client: SessionApiClient,
        private readonly onCreated: (state: SessionState) => void,
    ) {}

    async init(): Promise<void> {
        try {
            this.engines = (await this.client.listEngines()).map((e) => e.id);
        } catch {
            this.engines = ["hs_tree"];
        }
        this.render();
    }

    async create(): Promise<void> {
        const text = (this.root.querySelector(".dpi-text") as HTMLTextAreaElement).value;
        const engine = (this.root.querySelector(".engine") as HTMLSelectElement).value;
        const leadingK = Number(
            (this.root.querySelector(".leading-k") as HTMLInputElement).value) || 6;
        this.errorText = null;
        try {
            const state = await this.client.createSession({
                dpi_text: text,
                engine,
                leading_k: leadingK,
            });
            this.onCreated(state);
        } catch (error) {
            // 400 payloads carry the parser's line/column in the message.
            this.errorText = error instanceof Error
                ? error.message
                : "the session service is unreachable";
            this.render();
        }
    }

    readFile(file: File): Promise<void> {
        return file.text().then((content) => {
            (this.root.querySelector(".dpi-text") as HTMLTextAreaElement).value =
                content;
        });
    }

    render(): void {
        this.root.textContent = "";
        this.root.appendChild(el("h1", "title", "Start a diagnosis session"));

        const fileInput = el("input", "dpi-file");
        fileInput.type = "file";
        fileInput.accept = ".dpi";
        fileInput.addEventListener("change", () => {
            const file = fileInput.files?.[0];
            if (file) {
                void this.readFile(file);
            }
        });
        this.root.appendChild(fileInput);

        const textarea = el("textarea", "dpi-text");
        textarea.rows = 14;
        textarea.placeholder = "... or paste a .dpi document here";
        this.root.appendChild(textarea);

        const engineSelect = el("select", "engine");
        for (const id of this.engines) {
            const option = el("option", undefined, id);
            option.value = id;
            engineSelect.appendChild(option);
        }
        this.root.appendChild(engineSelect);

        const leadingK = el("input", "leading-k");
        leadingK.type = "number";
        leadingK.value = "6";
        leadingK.min = "2";
        this.root.appendChild(leadingK);

        const create = el("button", "create", "Create session");
        create.addEventListener("click", () => void this.create());
        this.root.appendChild(create);

        if (this.errorText !== null) {
            this.root.appendChild(el("p", "upload-error", this.errorText));
        }
    }
}

export class App {
    private readonly client: SessionApiClient;

    constructor(private readonly root: HTMLElement, baseUrl: string = "") {
        this.client = new SessionApiClient(baseUrl);
    }

    session: SessionScreen | null = null;

    async start(): Promise<void> {
        const upload = new UploadScreen(this.root, this.client, (state) => {
            this.session = new SessionScreen(this.root, this.client,
                                             state.session_id);
            void this.session.refresh();
        });
        await upload.init();
    }
}
