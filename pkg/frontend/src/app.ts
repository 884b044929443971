/** Controller: owns the view state, talks to the API, renders the sections. */

import type { ActivityQuery, ApiClient, IdentityQuery, MatchMode } from './api.js';
import { AboutPage } from './about.js';
import { renderChart, renderLegend } from './chart.js';
import { DetailsPanel } from './details.js';
import {
  DETAILS_LIMIT_DEFAULT,
  WIDTH_MAX,
  WIDTH_MIN,
  effectiveRange,
  encodeState,
  initialState,
  setWidthDays,
  type DetailsState,
  type Identity,
  type ViewState,
} from './state.js';
import { DAY_SECONDS, parseIso, type ActivityKind, type ProjectDto } from './types.js';

export interface ControllerOptions {
  /** Receives the canonical query string after every state change. */
  syncUrl?: (queryString: string) => void;
}

function identityQuery(state: ViewState): IdentityQuery {
  if (state.view !== 'developer' || !state.identity) return {};
  return {
    dev_name: state.identity.name,
    dev_email: state.identity.email,
    match_mode: state.identity.mode,
  };
}

export class App {
  state: ViewState;
  private projects: ProjectDto[] = [];
  private serial = 0;
  private abort: AbortController | null = null;
  /** First bucket start of the last un-zoomed series; zoom alignment origin. */
  private seriesOrigin = 0;

  private readonly sections: Record<string, HTMLElement> = {};
  private detailsPanel!: DetailsPanel;
  private aboutPage!: AboutPage;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: ControllerOptions = {},
  ) {
    this.state = initialState('');
  }

  async boot(restored?: ViewState | null): Promise<void> {
    this.projects = await this.api.projects();
    if (restored && this.projects.some((p) => p.name === restored.project)) {
      this.state = restored;
    } else if (this.projects.length > 0) {
      this.state = initialState(this.projects[0].name);
    }
    if (this.state.zoom) this.seriesOrigin = this.state.zoom.start;
    this.buildSkeleton();
    this.renderControls();
    await this.refresh();
    if (this.state.details) await this.renderDetails();
  }

  // --- state transitions ----------------------------------------------------

  private commit(next: ViewState): void {
    this.state = next;
    this.options.syncUrl?.(encodeState(this.state));
  }

  async selectProject(name: string): Promise<void> {
    this.commit(initialState(name));
    this.renderControls();
    await this.refresh();
    this.sections.details.textContent = '';
  }

  async applyIdentity(identity: Identity): Promise<void> {
    const next: ViewState = { ...this.state, view: 'developer', identity };
    delete next.zoom;
    delete next.details;
    this.commit(next);
    this.renderControls();
    await this.refresh();
    this.sections.details.textContent = '';
  }

  async clearIdentity(): Promise<void> {
    const next: ViewState = { ...this.state, view: 'project' };
    delete next.identity;
    delete next.zoom;
    delete next.details;
    this.commit(next);
    this.renderControls();
    await this.refresh();
    this.sections.details.textContent = '';
  }

  async setPeriod(start: number | undefined, end: number | undefined): Promise<void> {
    const next: ViewState = { ...this.state };
    if (start !== undefined && end !== undefined && start < end) {
      next.period = { start, end };
    } else {
      delete next.period;
    }
    delete next.zoom; // a zoom must stay inside the period
    this.commit(next);
    await this.refresh();
  }

  async zoomTo(from: number, to: number): Promise<void> {
    this.commit({ ...this.state, zoom: { start: from, end: to } });
    await this.refresh();
  }

  async resetZoom(): Promise<void> {
    const next = { ...this.state };
    delete next.zoom;
    this.commit(next);
    await this.refresh();
  }

  async changeWidth(widthDays: number): Promise<void> {
    this.commit(setWidthDays(this.state, widthDays, this.seriesOrigin));
    this.renderControls();
    await this.refresh();
  }

  async openDetails(activity: ActivityKind, bucketStart: number): Promise<void> {
    const details: DetailsState = {
      activity,
      bucketStart,
      limit: this.state.details?.limit ?? DETAILS_LIMIT_DEFAULT,
      offset: 0,
    };
    this.commit({ ...this.state, details });
    await this.renderDetails();
  }

  async updateDetails(details: DetailsState): Promise<void> {
    this.commit({ ...this.state, details });
    await this.renderDetails();
  }

  closeDetails(): void {
    const next = { ...this.state };
    delete next.details;
    this.commit(next);
    this.sections.details.textContent = '';
  }

  async showAbout(visible: boolean): Promise<void> {
    this.sections.explore.style.display = visible ? 'none' : '';
    this.sections.about.style.display = visible ? '' : 'none';
    if (visible) await this.aboutPage.render(this.state.project || undefined);
  }

  // --- data flow --------------------------------------------------------------

  /** Fetch and render the activity series; stale responses are dropped. */
  async refresh(): Promise<void> {
    if (!this.state.project) return;
    const mySerial = ++this.serial;
    this.abort?.abort();
    this.abort = new AbortController();

    const range = effectiveRange(this.state);
    const query: ActivityQuery = {
      project: this.state.project,
      width_days: this.state.widthDays,
      from: range?.start,
      to: range?.end,
      ...identityQuery(this.state),
    };
    try {
      const [series, profile] = await Promise.all([
        this.api.activity(query, this.abort.signal),
        this.api.profile(query),
      ]);
      if (mySerial !== this.serial) return; // a newer request superseded us
      if (!this.state.zoom && series.buckets.length > 0) {
        this.seriesOrigin = parseIso(series.buckets[0].start);
      }
      renderChart(this.sections.chart, series.buckets, series.anomalies, {
        onZoomSelect: (from, to) => void this.zoomTo(from, to),
        onZoomReset: () => void this.resetZoom(),
        onSegmentClick: (activity, bucketStart) => void this.openDetails(activity, bucketStart),
      });
      this.renderProfile(profile.total, profile.proportions, profile.balanced);
      this.renderAnomalyNote(series.anomalies.length);
    } catch (error) {
      if (mySerial !== this.serial) return;
      this.sections.chart.textContent = '';
      const failure = document.createElement('div');
      failure.className = 'chart-error';
      failure.textContent = `could not load activity: ${(error as Error).message}`;
      this.sections.chart.appendChild(failure);
    }
  }

  private async renderDetails(): Promise<void> {
    if (!this.state.details) return;
    await this.detailsPanel.render(this.state.details, {
      project: this.state.project,
      widthDays: this.state.widthDays,
      identity: identityQuery(this.state),
    });
  }

  // --- rendering --------------------------------------------------------------

  private buildSkeleton(): void {
    this.root.textContent = '';
    const header = document.createElement('header');
    const title = document.createElement('h1');
    title.textContent = 'maintviz';
    header.appendChild(title);
    const nav = document.createElement('nav');
    const explore = document.createElement('a');
    explore.href = '#';
    explore.textContent = 'explore';
    explore.addEventListener('click', (e) => {
      e.preventDefault();
      void this.showAbout(false);
    });
    const about = document.createElement('a');
    about.href = '#';
    about.className = 'nav-about';
    about.textContent = 'about';
    about.addEventListener('click', (e) => {
      e.preventDefault();
      void this.showAbout(true);
    });
    nav.append(explore, ' | ', about);
    header.appendChild(nav);
    this.root.appendChild(header);

    const explorePane = document.createElement('div');
    explorePane.className = 'explore';
    for (const name of ['controls', 'summary', 'legend', 'chart', 'details'] as const) {
      const section = document.createElement('section');
      section.className = name;
      explorePane.appendChild(section);
      this.sections[name] = section;
    }
    this.root.appendChild(explorePane);
    this.sections.explore = explorePane;

    const aboutPane = document.createElement('section');
    aboutPane.className = 'about';
    aboutPane.style.display = 'none';
    this.root.appendChild(aboutPane);
    this.sections.about = aboutPane;

    renderLegend(this.sections.legend);
    this.detailsPanel = new DetailsPanel(this.sections.details, this.api, {
      onChange: (details) => void this.updateDetails(details),
      onClose: () => this.closeDetails(),
    });
    this.aboutPage = new AboutPage(this.sections.about, this.api);
  }

  private renderControls(): void {
    const controls = this.sections.controls;
    controls.textContent = '';

    // project picker
    const projectSelect = document.createElement('select');
    projectSelect.className = 'control-project';
    for (const project of this.projects) {
      const option = document.createElement('option');
      option.value = project.name;
      option.textContent = `${project.name} (${project.commit_count})`;
      option.selected = project.name === this.state.project;
      projectSelect.appendChild(option);
    }
    projectSelect.addEventListener('change', () => void this.selectProject(projectSelect.value));
    controls.appendChild(labelled('project', projectSelect));

    // developer identity
    const devBox = document.createElement('span');
    devBox.className = 'control-identity';
    const nameInput = document.createElement('input');
    nameInput.className = 'identity-name';
    nameInput.placeholder = 'developer name';
    nameInput.value = this.state.identity?.name ?? '';
    const emailInput = document.createElement('input');
    emailInput.className = 'identity-email';
    emailInput.placeholder = 'developer email';
    emailInput.value = this.state.identity?.email ?? '';
    const modeSelect = document.createElement('select');
    modeSelect.className = 'identity-mode';
    for (const mode of ['name', 'email', 'both'] as MatchMode[]) {
      const option = document.createElement('option');
      option.value = mode;
      option.textContent = mode;
      option.selected = mode === (this.state.identity?.mode ?? 'name');
      modeSelect.appendChild(option);
    }
    const applyDev = document.createElement('button');
    applyDev.className = 'identity-apply';
    applyDev.textContent = 'developer view';
    applyDev.addEventListener('click', () => {
      const mode = modeSelect.value as MatchMode;
      const name = nameInput.value.trim() || undefined;
      const email = emailInput.value.trim() || undefined;
      if ((mode === 'name' || mode === 'both') && !name) return;
      if ((mode === 'email' || mode === 'both') && !email) return;
      void this.applyIdentity({ name, email, mode });
    });
    const clearDev = document.createElement('button');
    clearDev.className = 'identity-clear';
    clearDev.textContent = 'project view';
    clearDev.disabled = this.state.view === 'project';
    clearDev.addEventListener('click', () => void this.clearIdentity());
    devBox.append(nameInput, emailInput, modeSelect, applyDev, clearDev);
    controls.appendChild(devBox);

    // period filter (day-granular)
    const periodBox = document.createElement('span');
    periodBox.className = 'control-period';
    const fromInput = document.createElement('input');
    fromInput.type = 'date';
    fromInput.className = 'period-from';
    const toInput = document.createElement('input');
    toInput.type = 'date';
    toInput.className = 'period-to';
    if (this.state.period) {
      fromInput.value = new Date(this.state.period.start * 1000).toISOString().slice(0, 10);
      toInput.value = new Date((this.state.period.end - DAY_SECONDS) * 1000)
        .toISOString()
        .slice(0, 10);
    }
    const applyPeriod = document.createElement('button');
    applyPeriod.className = 'period-apply';
    applyPeriod.textContent = 'apply period';
    applyPeriod.addEventListener('click', () => {
      const start = fromInput.value ? parseIso(`${fromInput.value}T00:00:00Z`) : undefined;
      // inclusive end date: the period runs to the end of the chosen day
      const end = toInput.value ? parseIso(`${toInput.value}T00:00:00Z`) + DAY_SECONDS : undefined;
      void this.setPeriod(start, end);
    });
    const clearPeriod = document.createElement('button');
    clearPeriod.className = 'period-clear';
    clearPeriod.textContent = 'clear period';
    clearPeriod.addEventListener('click', () => void this.setPeriod(undefined, undefined));
    periodBox.append(fromInput, toInput, applyPeriod, clearPeriod);
    controls.appendChild(periodBox);

    // bucket width slider
    const slider = document.createElement('input');
    slider.type = 'range';
    slider.className = 'control-width';
    slider.min = String(WIDTH_MIN);
    slider.max = String(WIDTH_MAX);
    slider.value = String(this.state.widthDays);
    const widthLabel = document.createElement('span');
    widthLabel.className = 'width-value';
    widthLabel.textContent = `${this.state.widthDays} days`;
    slider.addEventListener('input', () => {
      widthLabel.textContent = `${slider.value} days`;
    });
    slider.addEventListener('change', () => void this.changeWidth(Number(slider.value)));
    controls.appendChild(labelled('bucket width', slider));
    controls.appendChild(widthLabel);
  }

  private renderProfile(
    total: number,
    proportions: Record<ActivityKind, number>,
    balanced: boolean,
  ): void {
    const summary = this.sections.summary;
    summary.textContent = '';
    const badge = document.createElement('span');
    badge.className = `balance-badge ${balanced ? 'balanced' : 'unbalanced'}`;
    badge.textContent = balanced ? 'balanced' : 'unbalanced';
    summary.appendChild(badge);
    const text = document.createElement('span');
    const parts = (['corrective', 'perfective', 'adaptive'] as ActivityKind[])
      .map((kind) => `${kind} ${(proportions[kind] * 100).toFixed(1)}%`)
      .join(' · ');
    text.textContent = ` ${total} classified commits · ${parts}`;
    summary.appendChild(text);
  }

  private renderAnomalyNote(count: number): void {
    const existing = this.sections.summary.querySelector('.anomaly-note');
    existing?.remove();
    if (count > 0) {
      const note = document.createElement('span');
      note.className = 'anomaly-note';
      note.textContent = ` · ${count} anomalous bucket${count === 1 ? '' : 's'}`;
      this.sections.summary.appendChild(note);
    }
  }
}

function labelled(text: string, control: HTMLElement): HTMLLabelElement {
  const label = document.createElement('label');
  label.append(`${text}: `, control);
  return label;
}
